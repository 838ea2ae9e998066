//! Exact Cramer solve for the small (2x2, 3x3) nodal systems.
//!
//! Each row is first multiplied through by a common denominator so the
//! cofactor expansion runs over polynomials. Row scaling leaves the solution
//! unchanged.

use num_rational::BigRational;
use num_traits::One;

use crate::error::SymbolicError;
use crate::poly::{Monomial, Poly};
use crate::ratfn::RatFn;

pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    match m.len() {
        0 => Poly::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = Poly::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &determinant(&minor);
                acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Common denominator of a row: a monomial lcm when every denominator is a
/// monomial, otherwise the product of the distinct denominators.
fn row_multiplier(entries: &[&RatFn]) -> Poly {
    if entries.iter().all(|e| e.den().is_monomial()) {
        let l = entries
            .iter()
            .map(|e| *e.den().leading().unwrap().0)
            .fold(Monomial::one(), |a, m| a.lcm(&m));
        return Poly::monomial(l, BigRational::one());
    }
    let mut distinct: Vec<&Poly> = Vec::new();
    for e in entries {
        if !e.den().is_constant() && !distinct.contains(&e.den()) {
            distinct.push(e.den());
        }
    }
    distinct.into_iter().fold(Poly::one(), |acc, d| &acc * d)
}

fn clear_row(entries: &[&RatFn], mult: &Poly) -> Vec<Poly> {
    entries
        .iter()
        .map(|e| {
            let scaled = e.num() * mult;
            scaled
                .exact_div(e.den())
                .expect("row multiplier is a multiple of every denominator")
        })
        .collect()
}

/// Solves `matrix * x = rhs` exactly.
pub fn cramer_solve(matrix: &[Vec<RatFn>], rhs: &[RatFn]) -> Result<Vec<RatFn>, SymbolicError> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(SymbolicError::Shape {
            rows: n,
            cols: matrix.first().map_or(0, Vec::len),
            rhs: rhs.len(),
        });
    }
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for (row, r) in matrix.iter().zip(rhs) {
        let mut entries: Vec<&RatFn> = row.iter().collect();
        entries.push(r);
        let mult = row_multiplier(&entries);
        let mut cleared = clear_row(&entries, &mult);
        b.push(cleared.pop().unwrap());
        a.push(cleared);
    }
    let det = determinant(&a);
    if det.is_zero() {
        return Err(SymbolicError::SingularSystem);
    }
    (0..n)
        .map(|j| {
            let replaced: Vec<Vec<Poly>> = a
                .iter()
                .zip(&b)
                .map(|(row, bi)| {
                    let mut r = row.clone();
                    r[j] = bi.clone();
                    r
                })
                .collect();
            RatFn::new(determinant(&replaced), det.clone())
        })
        .collect()
}
