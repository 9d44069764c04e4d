//! The geometric (Tits) representation with exact coefficients.
//!
//! Coefficients live in `Z[sqrt2, phi]`, which holds `2cos(pi/m)` for
//! `m in {2, 3, 4, 5, inf}`. The representation is faithful, so words are
//! identified by comparing matrices. This is independent of the braid-move
//! normal form and serves as a cross-check for it.

use std::collections::{HashMap, VecDeque};
use std::ops::{Add, Mul, Neg, Sub};

use crate::coxeter::{CoxeterMatrix, Order};
use crate::error::{Error, Result};

/// `a + b*sqrt2 + c*phi + d*sqrt2*phi` with integer coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Quad([i64; 4]);

impl Quad {
    pub const ZERO: Quad = Quad([0; 4]);
    pub const ONE: Quad = Quad([1, 0, 0, 0]);

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Quad([a, b, c, d])
    }

    pub fn int(a: i64) -> Self {
        Quad([a, 0, 0, 0])
    }

    pub fn sqrt2() -> Self {
        Quad([0, 1, 0, 0])
    }

    pub fn phi() -> Self {
        Quad([0, 0, 1, 0])
    }

    /// `2cos(pi/m)`, or `None` when it is not in the ring.
    pub fn two_cos_pi_over(order: Order) -> Option<Self> {
        match order {
            Order::Infinite => Some(Quad::int(2)),
            Order::Finite(1) => Some(Quad::int(-2)),
            Order::Finite(2) => Some(Quad::ZERO),
            Order::Finite(3) => Some(Quad::ONE),
            Order::Finite(4) => Some(Quad::sqrt2()),
            Order::Finite(5) => Some(Quad::phi()),
            Order::Finite(_) => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        let s = std::f64::consts::SQRT_2;
        let p = (1.0 + 5f64.sqrt()) / 2.0;
        let [a, b, c, d] = self.0;
        a as f64 + b as f64 * s + c as f64 * p + d as f64 * s * p
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        Quad(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, o: Quad) -> Quad {
        Quad(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad(self.0.map(|x| -x))
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, o: Quad) -> Quad {
        // Basis 1, r, p, rp with r^2 = 2 and p^2 = p + 1.
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        // Split as (x + y*p) with x, y in Z[r]: x = a + b r, y = c + d r.
        let zr = |a: i64, b: i64, c: i64, d: i64| (a * c + 2 * b * d, a * d + b * c);
        let (x1, y1) = ((a1, b1), (c1, d1));
        let (x2, y2) = ((a2, b2), (c2, d2));
        let xx = zr(x1.0, x1.1, x2.0, x2.1);
        let xy = zr(x1.0, x1.1, y2.0, y2.1);
        let yx = zr(y1.0, y1.1, x2.0, x2.1);
        let yy = zr(y1.0, y1.1, y2.0, y2.1);
        // (x1 + y1 p)(x2 + y2 p) = x1x2 + yy + (xy + yx + yy) p
        Quad([
            xx.0 + yy.0,
            xx.1 + yy.1,
            xy.0 + yx.0 + yy.0,
            xy.1 + yx.1 + yy.1,
        ])
    }
}

/// An element of `W` as the integer-coefficient matrix of its action on the
/// root basis; column `j` is the image of `e_j`.
pub type Matrix = Vec<Vec<Quad>>;

/// Right action of words on the root space.
#[derive(Clone, Debug)]
pub struct GeometricRepresentation {
    rank: usize,
    /// `two_b[s][t] = 2 B(e_s, e_t) = -2cos(pi/m_st)`.
    two_b: Vec<Vec<Quad>>,
}

impl GeometricRepresentation {
    pub fn new(matrix: &CoxeterMatrix) -> Result<Self> {
        let n = matrix.rank();
        let mut two_b = vec![vec![Quad::ZERO; n]; n];
        for s in 0..n {
            for t in 0..n {
                let c = Quad::two_cos_pi_over(matrix.order(s, t)).ok_or_else(|| {
                    Error::Validation(format!(
                        "order {} is not supported by the exact representation",
                        matrix.order(s, t)
                    ))
                })?;
                two_b[s][t] = -c;
            }
        }
        Ok(GeometricRepresentation { rank: n, two_b })
    }

    pub fn identity(&self) -> Matrix {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| if i == j { Quad::ONE } else { Quad::ZERO }).collect())
            .collect()
    }

    /// `M * sigma_s`: `sigma_s(v) = v - 2B(e_s, v) e_s`.
    pub fn right_mul(&self, m: &Matrix, s: usize) -> Matrix {
        // sigma_s(e_j) = e_j - two_b[s][j] e_s, so column j of M*sigma_s is
        // M e_j - two_b[s][j] * M e_s.
        let mut out = m.clone();
        for row in 0..self.rank {
            for j in 0..self.rank {
                out[row][j] = m[row][j] - self.two_b[s][j] * m[row][s];
            }
        }
        out
    }

    pub fn word(&self, word: &[u8]) -> Matrix {
        word.iter()
            .fold(self.identity(), |m, &s| self.right_mul(&m, s as usize))
    }

    /// Cayley-graph distances from the identity for all elements within
    /// `radius`, keyed by matrix.
    pub fn cayley_ball(&self, radius: usize) -> HashMap<Matrix, usize> {
        let mut dist = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(self.identity(), 0);
        queue.push_back(self.identity());
        while let Some(m) = queue.pop_front() {
            let d = dist[&m];
            if d == radius {
                continue;
            }
            for s in 0..self.rank {
                let next = self.right_mul(&m, s);
                if !dist.contains_key(&next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next);
                }
            }
        }
        dist
    }

    /// Numeric Gram matrix `B(e_s, e_t) = -cos(pi/m_st)`.
    pub fn gram_f64(matrix: &CoxeterMatrix) -> Vec<Vec<f64>> {
        let n = matrix.rank();
        (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| match matrix.order(s, t) {
                        Order::Infinite => -1.0,
                        Order::Finite(m) => -(std::f64::consts::PI / m as f64).cos(),
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_identities() {
        let r = Quad::sqrt2();
        let p = Quad::phi();
        assert_eq!(r * r, Quad::int(2));
        assert_eq!(p * p, p + Quad::ONE);
        let rp = r * p;
        assert_eq!(rp, Quad::new(0, 0, 0, 1));
        assert_eq!(rp * rp, Quad::int(2) * (p + Quad::ONE));
        let x = Quad::new(3, -1, 2, 5);
        let y = Quad::new(-2, 4, 1, -3);
        assert!(((x * y).to_f64() - x.to_f64() * y.to_f64()).abs() < 1e-9);
    }

    #[test]
    fn dihedral_orders_are_exact() {
        for m in [2u64, 3, 4, 5] {
            let cm = CoxeterMatrix::from_orders(&["a", "b"], &[&[1, m], &[m, 1]]).unwrap();
            let rep = GeometricRepresentation::new(&cm).unwrap();
            let ball = rep.cayley_ball(20);
            assert_eq!(ball.len(), 2 * m as usize);
            assert_eq!(*ball.values().max().unwrap(), m as usize);
        }
    }

    #[test]
    fn unsupported_orders_are_rejected() {
        let cm = CoxeterMatrix::triangle(6, 3, 3).unwrap();
        assert!(GeometricRepresentation::new(&cm).is_err());
    }
}
