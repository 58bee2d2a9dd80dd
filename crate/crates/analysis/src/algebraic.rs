//! Quadratic Boolean relations satisfied by a byte S-box.
//!
//! A relation is a GF(2) combination of the 137 monomials of degree at
//! most 2 in the input bits x and output bits y that evaluates to zero
//! on every pair (x, sbox(x)). The number of independent relations is
//! the headroom an algebraic attack has to work with; a random
//! permutation has essentially none.

use crate::f2::{gaussian_solve, F2Solution, F2System};
use snowlab_core::sboxes::ByteSBox;

/// 1 constant, 8 + 8 linear, 28 + 28 same-side products, 64 cross
/// products.
pub const MONOMIAL_COUNT: usize = 137;

/// Values of the monomials at (x, y), in the fixed basis order:
/// constant, x_i, y_i, x_i x_j (i < j), y_i y_j (i < j), x_i y_j.
pub fn monomial_values(x: u8, y: u8) -> Vec<bool> {
    let xb = |i: usize| (x >> i) & 1 == 1;
    let yb = |i: usize| (y >> i) & 1 == 1;
    let mut row = Vec::with_capacity(MONOMIAL_COUNT);
    row.push(true);
    for i in 0..8 {
        row.push(xb(i));
    }
    for i in 0..8 {
        row.push(yb(i));
    }
    for i in 0..8 {
        for j in i + 1..8 {
            row.push(xb(i) && xb(j));
        }
    }
    for i in 0..8 {
        for j in i + 1..8 {
            row.push(yb(i) && yb(j));
        }
    }
    for i in 0..8 {
        for j in 0..8 {
            row.push(xb(i) && yb(j));
        }
    }
    debug_assert_eq!(row.len(), MONOMIAL_COUNT);
    row
}

/// The space of quadratic relations of an S-box.
#[derive(Debug, Clone)]
pub struct QuadraticRelations {
    /// Dimension of the relation space.
    pub count: usize,
    /// A basis, each vector in the monomial order of
    /// [`monomial_values`].
    pub basis: Vec<Vec<u8>>,
}

/// Finds all quadratic relations of the S-box: the nullspace of the
/// 256 x 137 evaluation matrix.
pub fn quadratic_relations(sbox: &ByteSBox) -> QuadraticRelations {
    let mut sys = F2System::new(MONOMIAL_COUNT);
    for x in 0..=255u8 {
        sys.push_row(monomial_values(x, sbox.apply(x)), false);
    }
    let out = gaussian_solve(&sys);
    let basis = match out.solution {
        F2Solution::Unique(_) => Vec::new(),
        F2Solution::Space { nullspace, .. } => nullspace,
        F2Solution::Inconsistent => unreachable!("homogeneous systems are consistent"),
    };
    debug_assert_eq!(basis.len(), MONOMIAL_COUNT - out.rank);
    QuadraticRelations { count: MONOMIAL_COUNT - out.rank, basis }
}

/// True when the relation vector vanishes on every (x, sbox(x)) pair.
pub fn relation_holds(sbox: &ByteSBox, relation: &[u8]) -> bool {
    assert_eq!(relation.len(), MONOMIAL_COUNT);
    (0..=255u8).all(|x| {
        monomial_values(x, sbox.apply(x))
            .iter()
            .zip(relation)
            .fold(0u8, |acc, (&m, &r)| acc ^ (m as u8 & r))
            == 0
    })
}
