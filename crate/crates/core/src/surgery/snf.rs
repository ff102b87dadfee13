//! Smith normal form with its unimodular transforms, and the first homology
//! presentation `Z^n / rowspan(Q)` it gives.

use serde::Serialize;

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{self as s, Int};

/// `u * a * v = d`, `d` diagonal with `d_1 | d_2 | ...`, entries `>= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Int> Smith<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

pub fn smith_normal_form<T: Int>(a: &Matrix<T>) -> Result<Smith<T>> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize, T)> = None;
            for i in t..m {
                for j in t..n {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    let mag = s::abs(&d[(i, j)])?;
                    if best.as_ref().is_none_or(|b| mag < b.2) {
                        best = Some((i, j, mag));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return Ok(Smith { u, d, v });
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let f = s::neg(&d[(i, t)].div_floor(&d[(t, t)]))?;
                d.add_row(i, t, &f)?;
                u.add_row(i, t, &f)?;
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let f = s::neg(&d[(t, j)].div_floor(&d[(t, t)]))?;
                d.add_col(j, t, &f)?;
                v.add_col(j, t, &f)?;
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let stray = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match stray {
                Some(i) => {
                    d.add_row(t, i, &T::one())?;
                    u.add_row(t, i, &T::one())?;
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t)?;
            u.negate_row(t)?;
        }
    }
    Ok(Smith { u, d, v })
}

/// `Z^n / rowspan(Q)`, with the image of every meridian `e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct HomologyPresentation<T: Int> {
    /// Full Smith diagonal; `0` marks a free summand.
    #[serde(serialize_with = "crate::scalar::json::ints")]
    pub invariant_factors: Vec<T>,
    /// The nontrivial summands (factors other than 1), in order.
    #[serde(serialize_with = "crate::scalar::json::ints")]
    pub summands: Vec<T>,
    /// Coordinates of each `[mu_i]` in `summands`; torsion coordinates reduced.
    #[serde(serialize_with = "crate::scalar::json::matrix")]
    pub meridian_classes: Vec<Vec<T>>,
    /// When the free rank is 1: `[mu_i] = c_i g` on the free part, with `g`
    /// oriented so the last meridian's coefficient is positive (or the first
    /// nonzero one, if the last is torsion).
    #[serde(serialize_with = "opt_ints")]
    pub generator: Option<Vec<T>>,
}

fn opt_ints<T: Int, S: serde::Serializer>(
    v: &Option<Vec<T>>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => crate::scalar::json::ints(v, ser),
        None => ser.serialize_none(),
    }
}

impl<T: Int> HomologyPresentation<T> {
    pub fn free_rank(&self) -> usize {
        self.invariant_factors
            .iter()
            .filter(|d| d.is_zero())
            .count()
    }

    pub fn is_trivial(&self) -> bool {
        self.summands.is_empty()
    }

    /// `c_i` of `[mu_i] = c_i g`; an error unless the free rank is 1.
    pub fn scalar_classes(&self) -> Result<&[T]> {
        self.generator
            .as_deref()
            .ok_or(Error::FreeRank(self.free_rank()))
    }

    /// `[mu_i] = r_i [mu_ref]` on the free part, when every `c_i` is a
    /// multiple of `c_ref`.
    pub fn in_terms_of(&self, reference: usize) -> Result<Vec<T>> {
        let c = self.scalar_classes()?;
        let base = &c[reference];
        if base.is_zero() {
            return Err(Error::Construction(format!(
                "meridian {reference} is torsion"
            )));
        }
        c.iter()
            .map(|ci| {
                if ci.is_multiple_of(base) {
                    Ok(ci.clone() / base.clone())
                } else {
                    Err(Error::Construction(format!(
                        "{ci} is not a multiple of {base}"
                    )))
                }
            })
            .collect()
    }
}

pub fn homology<T: Int>(q: &Matrix<T>) -> Result<HomologyPresentation<T>> {
    if !q.is_square() {
        return Err(Error::NotSquare(q.rows(), q.cols()));
    }
    let n = q.rows();
    let smith = smith_normal_form(q)?;
    let factors = smith.diagonal();
    // x -> x V maps rowspan(Q) onto rowspan(D)
    let kept: Vec<usize> = (0..n).filter(|&j| !factors[j].is_one()).collect();
    let meridian_classes = (0..n)
        .map(|i| {
            kept.iter()
                .map(|&j| {
                    let c = smith.v[(i, j)].clone();
                    if factors[j].is_zero() {
                        c
                    } else {
                        c.mod_floor(&factors[j])
                    }
                })
                .collect()
        })
        .collect();
    let free: Vec<usize> = (0..n).filter(|&j| factors[j].is_zero()).collect();
    let generator = match free.as_slice() {
        [j] => {
            let mut c = smith.v.column(*j);
            let lead = c.iter().rev().find(|x| !x.is_zero()).cloned();
            if lead.is_some_and(|x| x.is_negative()) {
                c = c.iter().map(s::neg).collect::<Result<_>>()?;
            }
            Some(c)
        }
        _ => None,
    };
    Ok(HomologyPresentation {
        summands: kept.iter().map(|&j| factors[j].clone()).collect(),
        invariant_factors: factors,
        meridian_classes,
        generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn check(a: &Matrix<i64>) -> Smith<i64> {
        let sm = smith_normal_form(a).unwrap();
        assert_eq!(sm.u.mul(a).unwrap().mul(&sm.v).unwrap(), sm.d);
        assert_eq!(sm.u.det().unwrap().abs(), 1);
        assert_eq!(sm.v.det().unwrap().abs(), 1);
        let diag = sm.diagonal();
        for w in diag.windows(2) {
            if w[0] == 0 {
                assert_eq!(w[1], 0, "{diag:?}");
            } else {
                assert_eq!(w[1] % w[0], 0, "{diag:?}");
            }
        }
        sm
    }

    #[test]
    fn small_cases() {
        assert_eq!(
            check(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).diagonal(),
            vec![2, 6, 12]
        );
        assert_eq!(check(&m(&[&[0, 0], &[0, 0]])).diagonal(), vec![0, 0]);
        assert_eq!(check(&m(&[&[4, 6]])).diagonal(), vec![2]);
        assert_eq!(check(&m(&[&[2, 0], &[0, 3]])).diagonal(), vec![1, 6]);
    }

    #[test]
    fn homology_of_unit_is_trivial() {
        let h = homology(&m(&[&[1]])).unwrap();
        assert!(h.is_trivial());
        assert_eq!(h.meridian_classes, vec![Vec::<i64>::new()]);
        assert_eq!(h.scalar_classes(), Err(Error::FreeRank(0)));
    }

    #[test]
    fn lens_space() {
        let h = homology(&m(&[&[5]])).unwrap();
        assert_eq!(h.summands, vec![5]);
        assert_eq!(h.meridian_classes, vec![vec![1]]);
    }

    #[test]
    fn s1_x_s2() {
        let h = homology(&m(&[&[0]])).unwrap();
        assert_eq!(h.free_rank(), 1);
        assert_eq!(h.scalar_classes().unwrap(), &[1]);
    }

    #[test]
    fn not_square() {
        assert_eq!(
            homology(&m(&[&[1, 2]])).unwrap_err(),
            Error::NotSquare(1, 2)
        );
    }
}
