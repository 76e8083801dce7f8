//! Kernels, solutions and subquotients of integer row lattices, with the
//! coefficient ring deciding which invariant factors count as units.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::snf::smith;
use super::IntMatrix;
use crate::error::{Error, Result};
use crate::ring::RingSpec;

/// Basis (as rows) of `{x : x * m = 0}` over the integers. Over a
/// localization the same rows are a basis of the kernel.
pub fn kernel_basis(m: &IntMatrix, bit_bound: u64) -> Result<IntMatrix> {
    let s = smith(m, bit_bound)?;
    let idx: Vec<usize> = (s.rank..m.rows()).collect();
    Ok(s.u.select_rows(&idx))
}

/// Solves `x * m = b` over `ring` (integers or a localization).
pub fn solve_left(m: &IntMatrix, b: &[BigInt], ring: &RingSpec, bit_bound: u64) -> Result<Option<Vec<BigRational>>> {
    assert!(!ring.is_field(), "use the prime-field solver");
    assert_eq!(b.len(), m.cols());
    let s = smith(m, bit_bound)?;
    let c = s.v.left_apply(b);
    let mut y = vec![BigRational::zero(); m.rows()];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            if !ring.divides(&s.diagonal[i], ci) {
                return Ok(None);
            }
            y[i] = BigRational::new(ci.clone(), s.diagonal[i].clone());
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![BigRational::zero(); m.rows()];
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        for (j, xj) in x.iter_mut().enumerate() {
            let u = &s.u[(i, j)];
            if !u.is_zero() {
                *xj += yi * BigRational::from_integer(u.clone());
            }
        }
    }
    Ok(Some(x))
}

/// Integer solution of `x * m = b`, if one exists.
pub fn solve_left_int(m: &IntMatrix, b: &[BigInt], bit_bound: u64) -> Result<Option<Vec<BigInt>>> {
    Ok(solve_left(m, b, &RingSpec::Integers, bit_bound)?
        .map(|x| x.into_iter().map(|q| q.to_integer()).collect()))
}

/// A basis of the row lattice spanned by `gens`, in pivot order, together
/// with the integer combinations of `gens` producing each basis row.
pub fn row_lattice_basis(gens: &IntMatrix, bit_bound: u64) -> Result<(IntMatrix, IntMatrix)> {
    let s = smith(gens, bit_bound)?;
    let idx: Vec<usize> = (0..s.rank).collect();
    let combos = s.u.select_rows(&idx);
    let basis = combos.mul(gens);
    Ok((basis, combos))
}

/// Integer lattice quotient `Z / B` for row lattices `B ⊆ Z ⊆ Z^n`, with
/// invariant factors read in the given coefficient ring.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub ring: RingSpec,
    /// Basis of `Z`.
    pub cycle_basis: IntMatrix,
    /// Basis of `Z` adapted to `B`: row i times `orders_raw[i]` lies in `B`.
    pub adapted: IntMatrix,
    /// Raw invariant factors (0 = free direction), one per adapted row.
    pub orders_raw: Vec<BigInt>,
    /// Change of coordinates from `cycle_basis` to `adapted`.
    v: IntMatrix,
    bit_bound: u64,
}

impl Subquotient {
    pub fn new(z_gens: &IntMatrix, b_gens: &IntMatrix, ring: &RingSpec, bit_bound: u64) -> Result<Self> {
        assert!(!ring.is_field(), "use the prime-field routines");
        let n = z_gens.cols();
        let (k, _) = row_lattice_basis(z_gens, bit_bound)?;
        let kdim = k.rows();
        let mut coords = Vec::with_capacity(b_gens.rows());
        if kdim > 0 {
            let s = smith(&k, bit_bound)?;
            for i in 0..b_gens.rows() {
                let b = b_gens.row(i);
                let c = s.v.left_apply(b);
                let mut y = vec![BigInt::zero(); kdim];
                for (j, cj) in c.iter().enumerate() {
                    if j < s.rank {
                        let (q, r) = cj.div_rem(&s.diagonal[j]);
                        if !r.is_zero() {
                            return Err(Error::InvalidInput("boundary not contained in cycles".into()));
                        }
                        y[j] = q;
                    } else if !cj.is_zero() {
                        return Err(Error::InvalidInput("boundary not contained in cycles".into()));
                    }
                }
                coords.push(s.u.left_apply(&y));
            }
        } else if !b_gens.is_zero() {
            return Err(Error::InvalidInput("boundary not contained in cycles".into()));
        }
        let c = IntMatrix::from_row_vecs(kdim, coords);
        let (adapted, orders_raw, v) = if c.rows() == 0 || kdim == 0 {
            (k.clone(), vec![BigInt::zero(); kdim], IntMatrix::identity(kdim))
        } else {
            let s = smith(&c, bit_bound)?;
            let mut orders = vec![BigInt::zero(); kdim];
            orders[..s.rank].clone_from_slice(&s.diagonal[..s.rank]);
            (s.v_inv.mul(&k), orders, s.v)
        };
        debug_assert_eq!(adapted.cols(), n);
        Ok(Subquotient { ring: ring.clone(), cycle_basis: k, adapted, orders_raw, v, bit_bound })
    }

    /// Orders read in the ring: `None` for a free summand, `Some(d)` for a
    /// cyclic summand of order `d > 1`; unit summands are skipped.
    pub fn summands(&self) -> Vec<(usize, Option<BigInt>)> {
        let mut out = Vec::new();
        for (i, d) in self.orders_raw.iter().enumerate() {
            if d.is_zero() {
                out.push((i, None));
            } else {
                let dd = self.ring.non_unit_part(d);
                if !dd.is_one() {
                    out.push((i, Some(dd)));
                }
            }
        }
        out
    }

    pub fn free_rank(&self) -> usize {
        self.orders_raw.iter().filter(|d| d.is_zero()).count()
    }

    /// Torsion invariant factors (> 1) in increasing divisibility order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.summands().into_iter().filter_map(|(_, d)| d).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.summands().is_empty()
    }

    /// Coordinates of a cycle in the nontrivial summands (reduced modulo the
    /// summand order), or an error when `z` is not in the cycle lattice.
    pub fn coordinates(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        let kdim = self.cycle_basis.rows();
        let c = if kdim == 0 {
            if z.iter().any(|x| !x.is_zero()) {
                return Err(Error::InvalidInput("vector is not a cycle".into()));
            }
            Vec::new()
        } else {
            solve_left_int(&self.cycle_basis, z, self.bit_bound)?
                .ok_or_else(|| Error::InvalidInput("vector is not a cycle".into()))?
        };
        let cv = if kdim == 0 { Vec::new() } else { self.v.left_apply(&c) };
        Ok(self
            .summands()
            .into_iter()
            .map(|(i, d)| match d {
                Some(d) => cv[i].mod_floor(&d),
                None => cv[i].clone(),
            })
            .collect())
    }

    /// Representative cycles of the nontrivial summands.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        self.summands().into_iter().map(|(i, _)| self.adapted.row_vec(i)).collect()
    }

    pub fn describe(&self) -> String {
        describe_group(self.free_rank(), &self.torsion(), &self.ring)
    }
}

/// Text form such as `Z^2 + Z/5`, or `0`.
pub fn describe_group(free: usize, torsion: &[BigInt], ring: &RingSpec) -> String {
    let base = match ring {
        RingSpec::Integers => "Z".to_string(),
        r => r.to_string(),
    };
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push(base.clone()),
        f => parts.push(format!("{base}^{f}")),
    }
    for t in torsion {
        parts.push(format!("Z/{t}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Clears denominators of a rational vector by a positive integer factor.
pub fn clear_denominators(v: &[BigRational]) -> (BigInt, Vec<BigInt>) {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let out = v.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
    (l, out)
}
