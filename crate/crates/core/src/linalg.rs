//! Exact rational linear algebra: reduced row echelon form, kernels and
//! subspaces with a canonical basis.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::weyl::Rational;

fn zero() -> Rational {
    Rational::from_integer(0)
}

/// Reduced row echelon form of `rows` (each of length `ncols`), dropping zero
/// rows. Returns the rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..ncols {
        let Some(p) = (lead..rows.len()).find(|&i| rows[i][col] != zero()) else {
            continue;
        };
        rows.swap(lead, p);
        let inv = rows[lead][col].recip();
        for x in rows[lead].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows.len() {
            if i != lead && rows[i][col] != zero() {
                let f = rows[i][col];
                for k in 0..ncols {
                    let d = rows[lead][k] * f;
                    rows[i][k] -= d;
                }
            }
        }
        pivots.push(col);
        lead += 1;
        if lead == rows.len() {
            break;
        }
    }
    rows.truncate(lead);
    (rows, pivots)
}

/// Basis of `{v : A v = 0}`, one vector per free column, scaled to
/// primitive integer vectors with positive leading entry.
pub fn kernel(rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let (reduced, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero(); ncols];
            v[f] = Rational::from_integer(1);
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[f];
            }
            primitive(v)
        })
        .collect()
}

/// Scales a nonzero vector to coprime integers with positive first nonzero
/// entry.
pub fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let lcm = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return v;
    }
    let sign = ints.iter().find(|&&x| x != 0).map_or(1, |x| x.signum());
    ints.into_iter().map(|x| Rational::from_integer(sign * x / g)).collect()
}

/// A subspace of `Q^dim`, stored as the RREF of a spanning set so that
/// equality is basis equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    dim_ambient: usize,
    canonical: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn span(vectors: Vec<Vec<Rational>>, dim_ambient: usize) -> Self {
        let (canonical, _) = rref(vectors, dim_ambient);
        Subspace { dim_ambient, canonical }
    }

    /// Null space of the stacked constraint rows.
    pub fn kernel_of(rows: Vec<Vec<Rational>>, dim_ambient: usize) -> Self {
        Subspace::span(kernel(rows, dim_ambient), dim_ambient)
    }

    pub fn dim(&self) -> usize {
        self.canonical.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }

    /// Canonical basis scaled to primitive integer vectors.
    pub fn basis(&self) -> Vec<Vec<Rational>> {
        self.canonical.iter().cloned().map(primitive).collect()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.canonical.clone();
        rows.push(v.to_vec());
        rref(rows, self.dim_ambient).0.len() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.canonical.iter().all(|v| other.contains(v))
    }
}
