use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::linalg::IntMatrix;

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree
/// first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1);
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut q = vec![0i64; r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd] / lead;
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            r[i + j] -= c * dj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// An element of `Q(zeta_n) = Q[x]/Phi_n`, stored in the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn degree_of(n: u64) -> usize {
        cyclotomic_polynomial(n).len() - 1
    }

    pub fn zero(n: u64) -> Self {
        Cyclotomic { n, coeffs: vec![BigRational::zero(); Self::degree_of(n)] }
    }

    pub fn from_rational(n: u64, q: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = q;
        z
    }

    pub fn one(n: u64) -> Self {
        Self::from_rational(n, BigRational::one())
    }

    /// `zeta_n^k`
    pub fn zeta_pow(n: u64, k: u64) -> Self {
        let mut dense = vec![BigRational::zero(); n as usize];
        dense[(k % n) as usize] = BigRational::one();
        Self::reduce(n, dense)
    }

    /// Reduces a polynomial in `zeta_n` modulo `Phi_n`.
    pub fn reduce(n: u64, mut poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(n);
        let d = phi.len() - 1;
        // Phi_n is monic
        for i in (d..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(d) {
                poly[i - d + j] -= &c * BigRational::from_integer(pj.into());
            }
        }
        poly.resize(d, BigRational::zero());
        Cyclotomic { n, coeffs: poly }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Cyclotomic { n: self.n, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let d = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); (2 * d).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Self::reduce(self.n, prod)
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conj(&self) -> Self {
        let n = self.n as usize;
        let mut dense = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            dense[(n - k) % n] += c;
        }
        Self::reduce(self.n, dense)
    }

    /// `z * conj(z)`, exact.
    pub fn abs_squared(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Whether the element is a rational number; returns it if so.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// The field norm to Q, the determinant of multiplication by `self`.
    pub fn norm(&self) -> BigRational {
        let d = self.coeffs.len();
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigRational> = self.coeffs.iter().map(|c| c * BigRational::from_integer(den.clone())).collect();
        let z = Cyclotomic { n: self.n, coeffs: scaled };
        let mut m = IntMatrix::zeros(d, d);
        let mut basis = Cyclotomic::one(self.n);
        let x = Cyclotomic::zeta_pow(self.n, 1);
        for i in 0..d {
            let row = basis.mul(&z);
            for (j, c) in row.coeffs.iter().enumerate() {
                m[(i, j)] = c.to_integer();
            }
            basis = basis.mul(&x);
        }
        BigRational::new(m.det(), num_traits::pow(den, d))
    }

    /// Numerical value `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * PI * k as f64 / self.n as f64;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        (re, im)
    }

    pub fn magnitude(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "z{}", self.n)?;
                    } else {
                        write!(f, "z{}^{k}", self.n)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
