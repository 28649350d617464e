//! The category `F` of standard finite sets `stn(n) = {0, …, n-1}`.
//!
//! Morphisms are plain functions stored densely by source index. Two functions
//! with the same graph but different codomains are different morphisms.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinFun {
    cod: usize,
    values: Vec<usize>,
}

impl FinFun {
    pub fn new(cod: usize, values: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v >= cod) {
            return Err(Error::Index {
                what: "finite function value",
                index: bad,
                bound: cod,
            });
        }
        Ok(FinFun { cod, values })
    }

    pub fn identity(n: usize) -> Self {
        FinFun {
            cod: n,
            values: (0..n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.values.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, j: usize) -> usize {
        self.values[j]
    }

    /// Diagrammatic composition: first `self`, then `g`.
    pub fn then(&self, g: &FinFun) -> Result<FinFun> {
        if self.cod != g.dom() {
            return Err(Error::CompositionDomain {
                left: format!("{}", self.cod),
                right: format!("{}", g.dom()),
            });
        }
        Ok(FinFun {
            cod: g.cod,
            values: self.values.iter().map(|&v| g.values[v]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Every function `stn(m) → stn(n)`, in lexicographic order of values.
    pub fn all(m: usize, n: usize) -> Vec<FinFun> {
        if m > 0 && n == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut values = vec![0; m];
        loop {
            out.push(FinFun {
                cod: n,
                values: values.clone(),
            });
            let mut k = m;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                values[k] += 1;
                if values[k] < n {
                    break;
                }
                values[k] = 0;
            }
        }
    }
}

impl fmt::Debug for FinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}→{}", self.values, self.dom(), self.cod)
    }
}

pub fn compose(f: &FinFun, g: &FinFun) -> Result<FinFun> {
    f.then(g)
}

/// `∂^i_n : stn(n) → stn(n+1)`, the increasing inclusion missing `i`.
pub fn delta(i: usize, n: usize) -> Result<FinFun> {
    if i > n {
        return Err(Error::Index {
            what: "face map",
            index: i,
            bound: n,
        });
    }
    let values = (0..n).map(|j| if j < i { j } else { j + 1 }).collect();
    Ok(FinFun { cod: n + 1, values })
}

/// `σ^i_n : stn(n+2) → stn(n+1)`, the non-decreasing surjection hitting `i` twice.
pub fn sigma(i: usize, n: usize) -> Result<FinFun> {
    if i > n {
        return Err(Error::Index {
            what: "degeneracy map",
            index: i,
            bound: n,
        });
    }
    let values = (0..n + 2).map(|j| if j <= i { j } else { j - 1 }).collect();
    Ok(FinFun { cod: n + 1, values })
}

/// `ι^i_n : stn(n) → stn(n+i)`, `j ↦ j`.
pub fn iota(n: usize, i: usize) -> FinFun {
    FinFun {
        cod: n + i,
        values: (0..n).collect(),
    }
}

/// The transposition of `a` and `b` on `stn(n)`.
pub fn transposition(n: usize, a: usize, b: usize) -> Result<FinFun> {
    for x in [a, b] {
        if x >= n {
            return Err(Error::Index {
                what: "transposition point",
                index: x,
                bound: n,
            });
        }
    }
    let values = (0..n)
        .map(|j| if j == a { b } else if j == b { a } else { j })
        .collect();
    Ok(FinFun { cod: n, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ff(cod: usize, v: &[usize]) -> FinFun {
        FinFun::new(cod, v.to_vec()).unwrap()
    }

    #[test]
    fn identities() {
        assert_eq!(FinFun::identity(0), ff(0, &[]));
        assert_eq!(FinFun::identity(2), ff(2, &[0, 1]));
        assert_eq!(FinFun::identity(3), ff(3, &[0, 1, 2]));
    }

    #[test]
    fn composition_examples() {
        let swap = ff(2, &[1, 0]);
        assert_eq!(compose(&swap, &swap).unwrap(), FinFun::identity(2));
        assert_eq!(compose(&swap, &FinFun::identity(2)).unwrap(), swap);
        assert_eq!(compose(&ff(2, &[0]), &swap).unwrap(), ff(2, &[1]));
        assert!(matches!(
            compose(&ff(2, &[0]), &ff(1, &[0])),
            Err(Error::CompositionDomain { .. })
        ));
    }

    #[test]
    fn face_and_degeneracy_examples() {
        assert_eq!(delta(0, 0).unwrap(), ff(1, &[]));
        assert_eq!(delta(1, 1).unwrap(), ff(2, &[0]));
        assert_eq!(delta(0, 1).unwrap(), ff(2, &[1]));
        assert!(matches!(delta(2, 1), Err(Error::Index { .. })));

        assert_eq!(sigma(0, 0).unwrap(), ff(1, &[0, 0]));
        assert_eq!(sigma(0, 1).unwrap(), ff(2, &[0, 0, 1]));
        assert_eq!(sigma(1, 1).unwrap(), ff(2, &[0, 1, 1]));
        assert!(matches!(sigma(3, 2), Err(Error::Index { .. })));
    }

    #[test]
    fn inclusions() {
        assert_eq!(iota(2, 0), ff(2, &[0, 1]));
        assert_eq!(iota(1, 1), ff(2, &[0]));
        assert_eq!(iota(3, 1), ff(4, &[0, 1, 2]));
        for n in 0..8 {
            assert_eq!(iota(n, 1), delta(n, n).unwrap());
        }
    }

    #[test]
    fn new_rejects_out_of_range() {
        assert!(FinFun::new(2, vec![0, 2]).is_err());
    }

    #[test]
    fn category_laws_exhaustive() {
        for a in 0..=3 {
            for b in 0..=3 {
                for f in FinFun::all(a, b) {
                    assert_eq!(f.then(&FinFun::identity(b)).unwrap(), f);
                    assert_eq!(FinFun::identity(a).then(&f).unwrap(), f);
                    for c in 0..=3 {
                        for g in FinFun::all(b, c) {
                            let fg = f.then(&g).unwrap();
                            for d in 0..=3 {
                                for h in FinFun::all(c, d) {
                                    assert_eq!(
                                        fg.then(&h).unwrap(),
                                        f.then(&g.then(&h).unwrap()).unwrap()
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(FinFun::all(0, 0).len(), 1);
        assert_eq!(FinFun::all(2, 0).len(), 0);
        assert_eq!(FinFun::all(3, 2).len(), 8);
    }

    #[test]
    fn faces_inject_degeneracies_surject() {
        for n in 0..=5 {
            for i in 0..=n {
                assert!(delta(i, n).unwrap().is_injective());
                assert!(sigma(i, n).unwrap().is_surjective());
            }
        }
    }
}
