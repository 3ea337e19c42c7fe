//! Dense rational vectors as plain `Vec<Scalar>` with free helper functions.

use crate::num::{fmt_scalar, int, Scalar};
use num_traits::Zero;

pub type Vector = Vec<Scalar>;

pub fn zeros(dim: usize) -> Vector {
    vec![Scalar::zero(); dim]
}

pub fn unit(dim: usize, i: usize) -> Vector {
    let mut v = zeros(dim);
    v[i] = int(1);
    v
}

pub fn from_ints(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Scalar], t: &Scalar) -> Vector {
    a.iter().map(|x| x * t).collect()
}

pub fn neg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero(a: &[Scalar]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn concat(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().chain(b).cloned().collect()
}

/// Scales `a` so that its first nonzero coordinate has absolute value one.
pub fn normalize_direction(a: &[Scalar]) -> Vector {
    match a.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let s = num_traits::Signed::abs(p);
            a.iter().map(|x| x / &s).collect()
        }
        None => a.to_vec(),
    }
}

pub fn fmt_vector(a: &[Scalar]) -> String {
    let parts: Vec<String> = a.iter().map(fmt_scalar).collect();
    format!("({})", parts.join(", "))
}
