//! Separated coordinates (u, y) for the sl2 and sl3 polynomial models.
//!
//! Per color, x^{(i)} = u ∏_j (z_i − y^{(j)}) / ∏_{s≠i} (z_i − z_s), equivalently
//! Σ_i x^{(i)}/(t − z_i) = u ∏_j (t − y^{(j)}) / ∏_s (t − z_s).

mod eigen;
mod sl2;
mod sl3;

pub use eigen::{eigenfunction_check, EigenCheck};
pub use sl2::{psi_sl2, sklyanin_components, verify_sklyanin_sl2, SklyaninVerdict};
pub use sl3::{
    degree_decompose, graded_casimir_checks, diagonal_leading_term, psi_separated, psi_term, psi_zero_poly,
    reconstruct_psi_terms, verify_separation_sl3, GradedCheck, GradedComponent, SeparationVerdict, XiTerm,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{poly_roots_scalar, AlgebraError, MultiPoly, Scalar, UniPoly, Vars};
use crate::cartan::{CartanError, ProblemInstance};
use crate::canonical::CanonicalError;
use crate::master::MasterError;
use crate::rep::{PolyModel, RepError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SovError {
    #[error("rank {got} not supported here (want {want})")]
    Rank { want: usize, got: usize },
    #[error("u_{0} = 0: point on the excluded hyperplane")]
    ZeroU(usize),
    #[error("{samples} samples do not exceed the degree bound {bound}")]
    InsufficientSamples { samples: usize, bound: u32 },
    #[error("pole: {0}")]
    Pole(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error(transparent)]
    Master(#[from] MasterError),
}

/// Number of x-colors: 1 for sl2, 3 for sl3 (x₁, x₂, x₃).
fn colors(rank: usize) -> Result<usize, SovError> {
    match rank {
        1 => Ok(1),
        2 => Ok(3),
        r => Err(SovError::Rank { want: 2, got: r }),
    }
}

/// A point in separated coordinates; `u[k]` and `y[k][j]` per color k.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationPoint {
    pub u: Vec<Scalar>,
    pub y: Vec<Vec<Scalar>>,
}

impl SeparationPoint {
    pub fn is_exact(&self) -> bool {
        self.u.iter().chain(self.y.iter().flatten()).all(Scalar::is_exact)
    }

    /// y₁^{(j)} = y₂^{(j)} for all j (meaningful for sl3 only).
    pub fn is_diagonal(&self) -> bool {
        self.y.len() == 3 && self.y[0] == self.y[1]
    }

    /// Coordinates in the order of [`uy_vars`].
    pub fn flatten(&self) -> Vec<Scalar> {
        let mut out = self.u.clone();
        let nc = self.u.len();
        let m = self.y.first().map_or(0, Vec::len);
        for j in 0..m {
            for k in 0..nc {
                out.push(self.y[k][j].clone());
            }
        }
        out
    }
}

/// Variable set of the separated coordinates: `u`, `y1`.. for sl2; `u1`..`u3`, `y1_1`,`y2_1`,`y3_1`,.. for sl3.
pub fn uy_vars(rank: usize, n: usize) -> Result<Vars, SovError> {
    let nc = colors(rank)?;
    let m = n.saturating_sub(1);
    let names: Vec<String> = if nc == 1 {
        std::iter::once("u".to_string())
            .chain((1..=m).map(|j| format!("y{j}")))
            .collect()
    } else {
        (1..=3)
            .map(|k| format!("u{k}"))
            .chain((1..=m).flat_map(|j| (1..=3).map(move |k| format!("y{k}_{j}"))))
            .collect()
    };
    Ok(Vars::new(names))
}

/// Index of u_k (k 0-based) in [`uy_vars`].
pub fn u_index(_rank: usize, k: usize) -> usize {
    k
}

/// Index of y_k^{(j)} (both 0-based) in [`uy_vars`].
pub fn y_index(rank: usize, k: usize, j: usize) -> usize {
    let nc = if rank == 1 { 1 } else { 3 };
    nc + nc * j + k
}

pub(crate) fn model_for(inst: &ProblemInstance) -> Result<PolyModel, SovError> {
    if !inst.cartan.is_type_a() {
        return Err(RepError::NotTypeA.into());
    }
    colors(inst.rank())?;
    let p = inst.pairings()?;
    Ok(PolyModel::new(inst.rank(), inst.weights.m.clone(), p.gram)?)
}

fn denominators(z: &[Scalar]) -> Result<Vec<Scalar>, SovError> {
    (0..z.len())
        .map(|i| {
            let mut d = Scalar::one();
            for s in 0..z.len() {
                if s != i {
                    d = &d * &(&z[i] - &z[s]);
                }
            }
            d.inv()
                .map_err(|_| SovError::Pole(format!("z_{} repeated", i + 1)))
        })
        .collect()
}

/// x-coordinates in [`PolyModel`] variable order.
pub fn uy_to_x(inst: &ProblemInstance, point: &SeparationPoint) -> Result<Vec<Scalar>, SovError> {
    let nc = colors(inst.rank())?;
    let n = inst.n();
    if point.u.len() != nc || point.y.len() != nc || point.y.iter().any(|y| y.len() != n.saturating_sub(1)) {
        return Err(SovError::Shape("point does not match instance".into()));
    }
    let inv = denominators(&inst.z)?;
    let mut x = vec![Scalar::zero(); nc * n];
    for i in 0..n {
        for k in 0..nc {
            let mut v = &point.u[k] * &inv[i];
            for y in &point.y[k] {
                v = &v * &(&inst.z[i] - y);
            }
            x[nc * i + k] = v;
        }
    }
    Ok(x)
}

/// Inverse map, numeric: y_k are the roots of Σ_i x_k^{(i)} ∏_{s≠i}(t − z_s).
pub fn x_to_uy(inst: &ProblemInstance, x: &[Scalar], prec: usize) -> Result<SeparationPoint, SovError> {
    let nc = colors(inst.rank())?;
    let n = inst.n();
    if x.len() != nc * n {
        return Err(SovError::Shape(format!("{} coordinates for {} variables", x.len(), nc * n)));
    }
    let mut u = Vec::with_capacity(nc);
    let mut ys = Vec::with_capacity(nc);
    for k in 0..nc {
        let mut num = UniPoly::zero();
        let mut uk = Scalar::zero();
        for i in 0..n {
            let xi = &x[nc * i + k];
            uk = &uk + xi;
            let mut term = UniPoly::constant(xi.clone());
            for s in 0..n {
                if s != i {
                    term = term.mul(&UniPoly::linear(-&inst.z[s], Scalar::one()));
                }
            }
            num = num.add(&term);
        }
        if uk.is_zero() {
            return Err(SovError::ZeroU(k + 1));
        }
        let y = match num.degree() {
            Some(0) | None => Vec::new(),
            Some(1) => vec![(-&num.coeff(0)).checked_div(&num.coeff(1))?],
            Some(_) => poly_roots_scalar(&num, prec)?,
        };
        u.push(uk);
        ys.push(y);
    }
    Ok(SeparationPoint { u, y: ys })
}

/// Images of the x-variables as polynomials in (u, y).
pub fn change_images(inst: &ProblemInstance) -> Result<Vec<MultiPoly>, SovError> {
    let nc = colors(inst.rank())?;
    let n = inst.n();
    let vars = uy_vars(inst.rank(), n)?;
    let inv = denominators(&inst.z)?;
    let mut out = Vec::with_capacity(nc * n);
    for i in 0..n {
        for k in 0..nc {
            let mut p = MultiPoly::var(&vars, u_index(inst.rank(), k)).scale(&inv[i]);
            for j in 0..n - 1 {
                let lin = MultiPoly::constant(&vars, inst.z[i].clone())
                    .sub(&MultiPoly::var(&vars, y_index(inst.rank(), k, j)));
                p = p.mul(&lin);
            }
            out.push(p);
        }
    }
    Ok(out)
}

/// F(x(u, y)).
pub fn compose_with_change(inst: &ProblemInstance, f: &MultiPoly) -> Result<MultiPoly, SovError> {
    let images = change_images(inst)?;
    Ok(f.substitute(&images)?)
}

/// p(var) inside a multivariate ring.
pub(crate) fn univariate_in(vars: &Vars, idx: usize, p: &UniPoly) -> MultiPoly {
    MultiPoly::from_terms(
        vars,
        p.coeffs().iter().enumerate().map(|(k, c)| {
            let mut e = vec![0; vars.len()];
            e[idx] = k as u32;
            (e, c.clone())
        }),
    )
}

/// ∏_{k≠i} (y − z_k), and ∏_k (y − z_k) for `skip = None`.
pub(crate) fn clearing(z: &[Scalar], skip: Option<usize>) -> UniPoly {
    let mut p = UniPoly::one();
    for (k, zk) in z.iter().enumerate() {
        if Some(k) != skip {
            p = p.mul(&UniPoly::linear(-zk, Scalar::one()));
        }
    }
    p
}

/// A rational in [−60, 60]/[1, 13].
fn random_rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-60..=60), rng.gen_range(1..=13))
}

/// Seeded rational points with pairwise distinct coordinates avoiding z and `avoid`.
/// For sl3 with `diagonal`, y₂ = y₁.
pub fn sample_points(
    inst: &ProblemInstance,
    count: usize,
    seed: u64,
    diagonal: bool,
    avoid: &[Scalar],
) -> Result<Vec<SeparationPoint>, SovError> {
    let nc = colors(inst.rank())?;
    let m = inst.n().saturating_sub(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut used: Vec<Scalar> = inst.z.iter().chain(avoid).cloned().collect();
        let mut fresh = |rng: &mut ChaCha8Rng| loop {
            let q = random_rational(rng);
            if !used.contains(&q) {
                used.push(q.clone());
                return q;
            }
        };
        let u: Vec<Scalar> = (0..nc)
            .map(|_| loop {
                let q = random_rational(&mut rng);
                if !q.is_zero() {
                    return q;
                }
            })
            .collect();
        let mut y: Vec<Vec<Scalar>> = (0..nc).map(|_| (0..m).map(|_| fresh(&mut rng)).collect()).collect();
        if diagonal && nc == 3 {
            y[1] = y[0].clone();
        }
        out.push(SeparationPoint { u, y });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn sl2(z: Vec<Scalar>) -> ProblemInstance {
        let m = vec![vec![Rational::ONE]; z.len()];
        ProblemInstance::type_a(m, z, vec![0]).unwrap()
    }

    #[test]
    fn two_point_change() {
        let inst = sl2(vec![Scalar::int(0), Scalar::int(1)]);
        let p = SeparationPoint {
            u: vec![Scalar::one()],
            y: vec![vec![Scalar::ratio(1, 2)]],
        };
        let x = uy_to_x(&inst, &p).unwrap();
        assert_eq!(x, vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)]);
        // Σ x_i ∏_{s≠i}(t − z_s) = u ∏_j (t − y_j) at several t
        for t in [Scalar::int(3), Scalar::ratio(-2, 7)] {
            let lhs = &(&x[0] * &(&t - &Scalar::one())) + &(&x[1] * &t);
            assert_eq!(lhs, &t - &Scalar::ratio(1, 2));
        }
        assert_eq!(x_to_uy(&inst, &x, 128).unwrap(), p);
        let zero = SeparationPoint {
            u: vec![Scalar::zero()],
            y: vec![vec![Scalar::int(5)]],
        };
        let x0 = uy_to_x(&inst, &zero).unwrap();
        assert!(x0.iter().all(Scalar::is_zero));
        assert_eq!(x_to_uy(&inst, &x0, 128).unwrap_err(), SovError::ZeroU(1));
    }

    #[test]
    fn round_trip_three_points() {
        let inst = sl2(vec![Scalar::int(-1), Scalar::ratio(1, 3), Scalar::int(2)]);
        for p in sample_points(&inst, 5, 7, false, &[]).unwrap() {
            let x = uy_to_x(&inst, &p).unwrap();
            let back = x_to_uy(&inst, &x, 200).unwrap();
            let again = uy_to_x(&inst, &back).unwrap();
            for (a, b) in x.iter().zip(&again) {
                assert!((a - b).abs_f64() < 1e-40);
            }
        }
    }

    #[test]
    fn compose_examples() {
        let z = vec![Scalar::int(-1), Scalar::ratio(1, 3), Scalar::int(2)];
        let inst = sl2(z.clone());
        let model = model_for(&inst).unwrap();
        let vars = model.vars().clone();
        let sum = (0..3).fold(MultiPoly::zero(&vars), |a, i| a.add(&MultiPoly::var(&vars, i)));
        let uy = uy_vars(1, 3).unwrap();
        assert_eq!(compose_with_change(&inst, &sum).unwrap(), MultiPoly::var(&uy, 0));

        let two = sl2(vec![Scalar::int(2), Scalar::int(5)]);
        let v2 = model_for(&two).unwrap().vars().clone();
        let got = compose_with_change(&two, &MultiPoly::var(&v2, 0)).unwrap();
        let uy2 = uy_vars(1, 2).unwrap();
        let want = MultiPoly::var(&uy2, 0)
            .mul(&MultiPoly::constant(&uy2, Scalar::int(2)).sub(&MultiPoly::var(&uy2, 1)))
            .scale(&Scalar::ratio(-1, 3));
        assert_eq!(got, want);
    }

    #[test]
    fn sl3_colors_independent() {
        let m = vec![vec![Rational::ONE, Rational::ONE]; 2];
        let inst = ProblemInstance::type_a(m, vec![Scalar::int(0), Scalar::int(1)], vec![1, 1]).unwrap();
        let p = SeparationPoint {
            u: vec![Scalar::int(1), Scalar::int(2), Scalar::int(3)],
            y: vec![vec![Scalar::ratio(1, 2)], vec![Scalar::int(3)], vec![Scalar::int(-1)]],
        };
        let x = uy_to_x(&inst, &p).unwrap();
        let single = sl2(vec![Scalar::int(0), Scalar::int(1)]);
        for k in 0..3 {
            let q = SeparationPoint {
                u: vec![p.u[k].clone()],
                y: vec![p.y[k].clone()],
            };
            let xk = uy_to_x(&single, &q).unwrap();
            assert_eq!((x[k].clone(), x[3 + k].clone()), (xk[0].clone(), xk[1].clone()));
        }
        let back = x_to_uy(&inst, &x, 128).unwrap();
        assert_eq!(back, p);
    }
}
