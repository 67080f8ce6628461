/// Canonical normal form of a group element.
///
/// Two elements of the same group are equal iff their normal forms are
/// identical, so elements can be used directly as hash and ordering keys.
/// The derived `Ord` is the lexicographic normal-form order used to break
/// ties deterministically in searches.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Trivial,
    /// Freely reduced word. Letter `+k` is generator `k - 1`, `-k` its inverse.
    Free(Vec<i32>),
    /// Exponent vector.
    Abelian(Vec<i64>),
    /// Index into the multiplication table.
    Finite(u16),
    /// Alternating sequence of nontrivial syllables from distinct adjacent factors.
    Product(Vec<Syllable>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: usize,
    pub element: GroupElement,
}

impl Syllable {
    pub fn new(factor: usize, element: GroupElement) -> Self {
        Syllable { factor, element }
    }
}

pub(crate) fn reduce_free(word: &mut Vec<i32>, tail: &[i32]) {
    for &x in tail {
        if word.last() == Some(&-x) {
            word.pop();
        } else {
            word.push(x);
        }
    }
}
