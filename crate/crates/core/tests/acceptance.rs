//! The acceptance suite: one PASS/FAIL line per criterion, nonzero exit if
//! any fails. Runs without the libtest harness so the lines always print.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};
use systolab::builders;
use systolab::cli::dispatch_to;
use systolab::growth::{
    ball_profile, entropy_estimate, free_product_limit, growth_table,
    submultiplicativity_violations,
};
use systolab::invariants::{
    stable_systole, systolic_ratio, volume_entropy, GeodesicOptions, SystoleMode,
};
use systolab::optimize::{optimize_ratio, OptimizeConfig};
use systolab::{Budget, GroupSpec, MetricComplex, Norm, PiOneData};

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, secs: u64) -> std::result::Result<(), String> {
    ensure(
        elapsed <= Duration::from_secs(secs),
        format!("took {elapsed:.1?}, limit {secs} s"),
    )
}

fn free_group_growth() -> Check {
    let start = Instant::now();
    let g = GroupSpec::parse("free 2").unwrap();
    let radii: Vec<f64> = (0..=12).map(f64::from).collect();
    let t =
        growth_table(&g, &Norm::word(), &radii, Budget::default()).map_err(|e| e.to_string())?;
    for (r, &b) in t.counts.iter().enumerate() {
        let want = 2 * 3u64.pow(r as u32) - 1;
        ensure(b == want, format!("beta({r}) = {b}, expected {want}"))?;
    }
    let e = entropy_estimate(&g, &Norm::word(), 12.0, 5, Budget::default())
        .map_err(|e| e.to_string())?;
    let rel = (e.point_estimate / 3f64.ln() - 1.0).abs();
    ensure(
        rel <= 0.01,
        format!(
            "estimate {} is {:.3}% off log 3",
            e.point_estimate,
            100.0 * rel
        ),
    )?;
    within(start.elapsed(), 60)?;
    Ok(format!(
        "beta exact for r <= 12, estimate {:.6} ({:.3}% off log 3)",
        e.point_estimate,
        100.0 * rel
    ))
}

fn polynomial_growth() -> Check {
    let start = Instant::now();
    let g = GroupSpec::parse("abelian 2").unwrap();
    let e = entropy_estimate(&g, &Norm::word(), 200.0, 5, Budget::default())
        .map_err(|e| e.to_string())?;
    ensure(
        e.point_estimate <= 0.05,
        format!("estimate {}", e.point_estimate),
    )?;
    let radii: Vec<f64> = (100..=200).map(f64::from).collect();
    let t =
        growth_table(&g, &Norm::word(), &radii, Budget::default()).map_err(|e| e.to_string())?;
    let seq: Vec<f64> = t
        .radii
        .iter()
        .zip(&t.counts)
        .map(|(r, &b)| (b as f64).ln() / r)
        .collect();
    ensure(
        seq.windows(2).all(|w| w[1] < w[0]),
        "lower sequence not decreasing on [100, 200]",
    )?;
    within(start.elapsed(), 10)?;
    Ok(format!(
        "estimate {:.5}, (1/r) log beta decreasing over [100, 200]",
        e.point_estimate
    ))
}

fn bound_consistency() -> Check {
    let b = Budget::default();
    let f2 = GroupSpec::parse("free 2").unwrap();
    let zz = GroupSpec::parse("product { abelian 1 ; abelian 1 }").unwrap();
    let cases = [
        ("F2", f2.clone(), Norm::word()),
        (
            "Z*Z rho=2",
            zz.clone(),
            Norm::parse("freeprod word 2 word", &zz, b).unwrap(),
        ),
    ];
    let mut notes = Vec::new();
    for (name, g, norm) in cases {
        let r_max = 12.0;
        let e = entropy_estimate(&g, &norm, r_max, 5, b).map_err(|e| e.to_string())?;
        let upper = e.upper_bound.ok_or(format!("{name}: no upper bound"))?;
        let last = e.lower_sequence.last().unwrap().1;
        ensure(
            upper >= last - 1e-9,
            format!("{name}: bound {upper} < lower value {last}"),
        )?;
        let profile = ball_profile(&g, &norm, r_max, b).map_err(|e| e.to_string())?;
        // integer radii: at r = t = 1/2 the word-norm count already breaks the inequality
        let radii: Vec<f64> = (0..=12).map(f64::from).collect();
        let gens = norm
            .generator_count(&g)
            .ok_or(format!("{name}: not a generator norm"))?;
        let bad = submultiplicativity_violations(&profile, &radii, gens);
        ensure(
            bad.is_empty(),
            format!("{name}: {} submultiplicativity violations", bad.len()),
        )?;
        notes.push(format!("{name}: bound {upper:.4} >= {last:.4}"));
    }
    Ok(format!(
        "{}; no submultiplicativity violations",
        notes.join(", ")
    ))
}

fn free_product_trend() -> Check {
    let z = GroupSpec::free_abelian(1);
    let rhos = [1.0, 2.0, 4.0, 8.0, 16.0];
    let rows = free_product_limit(
        &z,
        &z,
        &Norm::word(),
        &Norm::word(),
        &rhos,
        12.0,
        5,
        Budget::default(),
    )
    .map_err(|e| e.to_string())?;
    let est: Vec<f64> = rows.iter().map(|r| r.estimate.point_estimate).collect();
    ensure(
        est.windows(2).all(|w| w[1] <= w[0]),
        format!("not non-increasing: {est:?}"),
    )?;
    ensure(
        est.iter().all(|&e| e >= 0.0),
        format!("negative value: {est:?}"),
    )?;
    let frac = est[4] / est[0];
    ensure(
        frac <= 0.25,
        format!("rho=16 is {:.1}% of rho=1", 100.0 * frac),
    )?;
    Ok(format!(
        "estimates {:?}, rho=16 is {:.1}% of rho=1",
        est.iter()
            .map(|e| (e * 1e4).round() / 1e4)
            .collect::<Vec<_>>(),
        100.0 * frac
    ))
}

fn geometry_group_agreement() -> Check {
    let b = Budget::default();
    let zz = GroupSpec::parse("product { abelian 1 ; abelian 1 }").unwrap();
    let r_max = 12.0;
    let mut notes = Vec::new();
    for rho in [1.0, 2.0, 4.0] {
        let (x, p) = builders::wedge_with_phi(&[1.0, rho]).map_err(|e| e.to_string())?;
        let geo = volume_entropy(&x, &p, r_max, 5, None, b)
            .map_err(|e| e.to_string())?
            .estimate
            .point_estimate;
        let norm = Norm::parse(&format!("freeprod word {rho} word"), &zz, b).unwrap();
        let alg = entropy_estimate(&zz, &norm, r_max, 5, b)
            .map_err(|e| e.to_string())?
            .point_estimate;
        let rel = (geo / alg - 1.0).abs();
        ensure(
            rel <= 0.03,
            format!("rho={rho}: cover {geo} vs free product {alg}"),
        )?;
        if rho == 1.0 {
            let off = (geo / 3f64.ln() - 1.0).abs();
            ensure(
                off <= 0.02,
                format!("unit wedge {geo} is {:.2}% off log 3", 100.0 * off),
            )?;
        }
        notes.push(format!("rho={rho}: {geo:.4} vs {alg:.4}"));
    }
    Ok(notes.join(", "))
}

fn pu_anchor() -> Check {
    let start = Instant::now();
    let (x, p) = builders::hemi_icosahedron(1.0).map_err(|e| e.to_string())?;
    let cfg = OptimizeConfig {
        max_iters: 400,
        min_step: 1.002,
        subdivisions: 2,
        mode: SystoleMode::Geodesic(GeodesicOptions {
            steiner_points: 4,
            candidates: 16,
            ..Default::default()
        }),
        ..Default::default()
    };
    let out = optimize_ratio(&x, &p, &cfg).map_err(|e| e.to_string())?;
    let pu = 2.0 / PI;
    ensure(
        out.trace.windows(2).all(|w| w[1].ratio <= w[0].ratio),
        "trace increases",
    )?;
    ensure(out.ratio >= pu, format!("ratio {} below 2/pi", out.ratio))?;
    ensure(
        out.ratio <= 1.1 * pu,
        format!(
            "ratio {} is {:.2}% above 2/pi",
            out.ratio,
            100.0 * (out.ratio / pu - 1.0)
        ),
    )?;
    within(start.elapsed(), 600)?;
    Ok(format!(
        "ratio {:.6} ({:.2}% above 2/pi), recheck {:.6}, {} accepted moves, {:.0?}",
        out.ratio,
        100.0 * (out.ratio / pu - 1.0),
        out.verified_ratio,
        out.accepted,
        start.elapsed()
    ))
}

fn scale_invariance() -> Check {
    let b = Budget::default();
    let cases: Vec<(&str, (MetricComplex, PiOneData))> = vec![
        ("circle", builders::circle_with_phi(1.7, 0).unwrap()),
        ("wedge", builders::wedge_with_phi(&[1.0, 2.0]).unwrap()),
        (
            "three circles",
            builders::wedge_with_phi(&[1.0, 1.5, 2.5]).unwrap(),
        ),
        (
            "grid torus",
            builders::grid_torus_with_phi(3, 4, 1.0).unwrap(),
        ),
        (
            "sheared torus",
            builders::lattice_torus(3, 3, [2.0, 0.0], [0.5, 1.5]).unwrap(),
        ),
        ("projective plane", builders::hemi_icosahedron(1.0).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    for (name, (x, p)) in &cases {
        let n = x.dimension() as f64;
        let r_max = 8.0;
        let measure = |y: &MetricComplex, r: f64| -> std::result::Result<(f64, f64), String> {
            let ratio = systolic_ratio(y, p, b).map_err(|e| e.to_string())?;
            let lam = volume_entropy(y, p, r, 4, None, b)
                .map_err(|e| e.to_string())?
                .estimate
                .point_estimate;
            Ok((
                ratio,
                lam * y.volume().map_err(|e| e.to_string())?.powf(1.0 / n),
            ))
        };
        let (r0, e0) = measure(x, r_max)?;
        for c in [0.5, 3.0] {
            let (r1, e1) = measure(&x.scaled(c).map_err(|e| e.to_string())?, r_max * c)?;
            let dr = (r1 - r0).abs() / r0;
            let de = if e0 == 0.0 {
                e1.abs()
            } else {
                (e1 - e0).abs() / e0
            };
            worst = worst.max(dr).max(de);
            ensure(
                dr <= 1e-9 && de <= 1e-9,
                format!("{name} at c={c}: ratio {r0} -> {r1}, entropy product {e0} -> {e1}"),
            )?;
        }
    }
    Ok(format!(
        "{} complexes, worst relative change {worst:.1e}",
        cases.len()
    ))
}

fn stable_brackets() -> Check {
    let b = Budget::default();
    let (c, pc) = builders::circle_with_phi(5.0, 0).unwrap();
    let s = stable_systole(&c, &pc, &[1], 8, b).map_err(|e| e.to_string())?;
    ensure(
        s.per_k.iter().all(|&(_, _, r)| r == 5.0) && s.lower == 5.0 && s.upper == 5.0,
        format!("circle: {s:?}"),
    )?;
    let (w, pw) = builders::wedge_with_phi(&[1.0, 1.0]).unwrap();
    let k_max = 8;
    let s = stable_systole(&w, &pw, &[1, 1], k_max, b).map_err(|e| e.to_string())?;
    ensure(
        s.lower <= 2.0 && 2.0 <= s.upper,
        format!("wedge bracket [{}, {}]", s.lower, s.upper),
    )?;
    ensure(
        s.upper - s.lower <= 2.0 * s.diameter / k_max as f64 + 1e-12,
        format!("wedge bracket width {}", s.upper - s.lower),
    )?;
    let (t, pt) = builders::grid_torus_with_phi(3, 4, 1.0).unwrap();
    let s = stable_systole(&t, &pt, &[1, 0], k_max, b).map_err(|e| e.to_string())?;
    ensure(
        s.lower <= 3.0 && 3.0 <= s.upper,
        format!("torus bracket [{}, {}]", s.lower, s.upper),
    )?;
    Ok(format!(
        "circle 5 exact, wedge contains 2, torus [{:.4}, {:.4}] contains 3",
        s.lower, s.upper
    ))
}

fn norm_axioms() -> Check {
    let pairs = 10_000;
    let mut checked = 0;
    for (class, group) in common::group_classes() {
        for (kind, norm) in common::norms_for(class, &group) {
            let mut rng = ChaCha8Rng::seed_from_u64(checked as u64 + 1);
            for _ in 0..pairs {
                let (lg, lh) = (rng.gen_range(0..6), rng.gen_range(0..6));
                let g = group.random_word(&mut rng, lg);
                let h = group.random_word(&mut rng, lh);
                if let Some(v) = common::axiom_violation(&group, &norm, &g, &h) {
                    return Err(format!("{kind} on {class}: {v}"));
                }
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} norm/group combinations x {pairs} pairs, zero violations"
    ))
}

fn determinism() -> Check {
    let data = |n: &str| format!("{}/data/{n}", env!("CARGO_MANIFEST_DIR"));
    let (torus, ab, wedge, free) = (
        data("torus3x4.txt"),
        data("ab.txt"),
        data("wedge.txt"),
        data("free2.txt"),
    );
    let cases: Vec<Vec<&str>> = vec![
        vec!["growth", "--group", "free 2", "--rmax", "10"],
        vec!["free-product-limit", "--rmax", "10"],
        vec!["systole", "--complex", &torus, "--phi", &ab],
        vec![
            "stable-systole",
            "--complex",
            &torus,
            "--phi",
            &ab,
            "--class",
            "1,0",
        ],
        vec![
            "volume-entropy",
            "--complex",
            &wedge,
            "--phi",
            &free,
            "--rmax",
            "10",
        ],
        vec![
            "optimize",
            "--complex",
            &torus,
            "--phi",
            &ab,
            "--iters",
            "5",
        ],
        vec![
            "scan", "--family", "wedges", "--family", "tori", "--rmax", "6",
        ],
    ];
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (i, args) in cases.iter().enumerate() {
        let mut runs = Vec::new();
        for (j, threads) in ["1", "1", "4"].iter().enumerate() {
            let dir = root.path().join(format!("{i}-{j}"));
            let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
            argv.extend([
                "--threads".into(),
                threads.to_string(),
                "--out".into(),
                dir.display().to_string(),
            ]);
            let code = dispatch_to(&argv, &mut Vec::new(), &mut Vec::new());
            ensure(code == 0, format!("{args:?} exited {code}"))?;
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
                .map_err(|e| e.to_string())?
                .filter_map(|e| e.ok())
                .filter(|e| e.file_name() != "manifest.txt")
                .map(|e| {
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        std::fs::read(e.path()).unwrap(),
                    )
                })
                .collect();
            files.sort();
            runs.push(files);
        }
        ensure(
            runs[0] == runs[1],
            format!("{} differs between runs", args[0]),
        )?;
        ensure(
            runs[0] == runs[2],
            format!("{} differs between 1 and 4 threads", args[0]),
        )?;
    }
    Ok(format!(
        "{} subcommands byte-identical across reruns and --threads 1/4",
        cases.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("free-group growth exactness", free_group_growth),
        ("polynomial-growth entropy", polynomial_growth),
        ("entropy bound consistency", bound_consistency),
        ("free-product limit trend", free_product_trend),
        ("geometry-group cross-validation", geometry_group_agreement),
        ("projective plane anchor", pu_anchor),
        ("scale invariance", scale_invariance),
        ("stable systole brackets", stable_brackets),
        ("norm axioms", norm_axioms),
        ("determinism", determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.1} s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
