use std::cmp::Ordering;

use smallvec::SmallVec;

/// Ordered PBW monomial `g_0^{e_0} … g_{n-1}^{e_{n-1}}`. Exponents are signed;
/// negative values only occur on generators that were made invertible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub(crate) SmallVec<[i32; 12]>);

impl Mono {
    pub fn unit(n: usize) -> Mono {
        Mono(SmallVec::from_elem(0, n))
    }

    pub fn atom(n: usize, slot: usize, e: i32) -> Mono {
        let mut m = Mono::unit(n);
        m.0[slot] = e;
        m
    }

    pub fn from_exponents(e: &[i32]) -> Mono {
        Mono(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    /// Sum of the positive exponents.
    pub fn degree(&self) -> u32 {
        self.0.iter().filter(|e| **e > 0).map(|e| *e as u32).sum()
    }

    pub fn last_slot(&self) -> Option<usize> {
        self.0.iter().rposition(|e| *e != 0)
    }

    pub fn first_slot(&self) -> Option<usize> {
        self.0.iter().position(|e| *e != 0)
    }

    /// The product when no reordering is needed, i.e. every generator of
    /// `other` sits at or after the last generator of `self`.
    pub fn concat_if_ordered(&self, other: &Mono) -> Option<Mono> {
        match (self.last_slot(), other.first_slot()) {
            (Some(a), Some(b)) if b < a => None,
            _ => {
                let mut out = self.clone();
                for (x, y) in out.0.iter_mut().zip(other.0.iter()) {
                    *x += *y;
                }
                Some(out)
            }
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    /// Degree first, then exponents with the first generator most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}
