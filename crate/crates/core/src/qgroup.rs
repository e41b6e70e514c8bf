//! (p+1)-dimensional representations of Fun(GL_(q^(1/2))(2)) and
//! Fun(SL_(q^(1/2))(2)):
//!
//! a = g^α ∂, b = β g^(1/2), c = γ g^(1/2), d = βγ(q^(1/2) - q^(-1/2)) θ g^(-α).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qarith::{parse_rational, CycloContext, CycloElement, Field};
use crate::report::Report;
use crate::single_mode::SingleModeRep;
use crate::ExactMatrix;

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        let twice = r * num_rational::BigRational::from_integer(2.into());
        if !twice.is_integer() {
            return Err(Error::InvalidParameter(format!("{s} is not a half-integer")));
        }
        let twice: i64 = twice
            .to_integer()
            .try_into()
            .map_err(|_| Error::InvalidParameter(format!("{s} is out of range")))?;
        Ok(HalfInt(twice))
    }
}

#[derive(Clone, Debug)]
pub struct QGroupRep {
    ctx: Arc<CycloContext>,
    pub alpha: HalfInt,
    pub beta: CycloElement,
    pub gamma: CycloElement,
    pub a: ExactMatrix,
    pub b: ExactMatrix,
    pub c: ExactMatrix,
    pub d: ExactMatrix,
    /// The scalar -q^(-1/2) βγ.
    pub qdet: CycloElement,
}

pub fn build_glq2(
    ctx: &Arc<CycloContext>,
    alpha: HalfInt,
    beta: CycloElement,
    gamma: CycloElement,
) -> Result<QGroupRep> {
    if beta.is_zero() {
        return Err(Error::ZeroParameter("beta"));
    }
    if gamma.is_zero() {
        return Err(Error::ZeroParameter("gamma"));
    }
    let rep = SingleModeRep::new(ctx, None)?;
    let two_alpha = alpha.twice();
    let half = ctx.q_half_power(1);
    let half_inv = ctx.q_half_power(-1);
    let a = rep.g_power_half(two_alpha).matmul(&rep.partial);
    let b = rep.g_power_half(1).scale(&beta);
    let c = rep.g_power_half(1).scale(&gamma);
    let d = rep
        .theta
        .matmul(&rep.g_power_half(-two_alpha))
        .scale(&(beta.clone() * gamma.clone() * (half - half_inv.clone())));
    let qdet = -(half_inv * beta.clone() * gamma.clone());
    Ok(QGroupRep {
        ctx: ctx.clone(),
        alpha,
        beta,
        gamma,
        a,
        b,
        c,
        d,
        qdet,
    })
}

/// γ = -q^(1/2)/β, so that the quantum determinant is 1.
pub fn build_slq2(ctx: &Arc<CycloContext>, alpha: HalfInt, beta: CycloElement) -> Result<QGroupRep> {
    if beta.is_zero() {
        return Err(Error::ZeroParameter("beta"));
    }
    let gamma = -(ctx.q_half_power(1) / beta.clone());
    build_glq2(ctx, alpha, beta, gamma)
}

impl QGroupRep {
    pub fn ctx(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// ad - q^(1/2) bc as a matrix.
    pub fn qdet_matrix(&self) -> ExactMatrix {
        &self.a.matmul(&self.d) - &self.b.matmul(&self.c).scale(&self.ctx.q_half_power(1))
    }

    /// The same representation with d doubled; breaks [a, d].
    pub fn perturbed(&self) -> Self {
        let mut out = self.clone();
        out.d = self.d.scale(&self.ctx.int(2));
        out
    }
}

/// The six commutation relations, the value of the quantum determinant, and
/// its centrality.
pub fn check_glq2_relations(rep: &QGroupRep) -> Report {
    let ctx = rep.ctx();
    let h = ctx.q_half_power(1);
    let (a, b, c, d) = (&rep.a, &rep.b, &rep.c, &rep.d);
    let qcomm = |x: &ExactMatrix, y: &ExactMatrix| x.matmul(y) == y.matmul(x).scale(&h);
    let mut report = Report::new();
    report.push("ab = q^(1/2) ba", qcomm(a, b), "");
    report.push("ac = q^(1/2) ca", qcomm(a, c), "");
    report.push("bd = q^(1/2) db", qcomm(b, d), "");
    report.push("cd = q^(1/2) dc", qcomm(c, d), "");
    report.push("bc = cb", b.commutator(c).is_zero(), "");
    report.push(
        "[a, d] = (q^(1/2) - q^(-1/2)) bc",
        a.commutator(d) == b.matmul(c).scale(&(h - ctx.q_half_power(-1))),
        "",
    );
    let det = rep.qdet_matrix();
    let expected = ExactMatrix::identity(rep.dim()).scale(&rep.qdet);
    report.push("qdet = -q^(-1/2) βγ", det == expected, format!("{}", rep.qdet));
    let central = [a, b, c, d].iter().all(|x| det.commutator(x).is_zero());
    report.push("qdet central", central, "");
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn parses_half_integers() {
        assert_eq!("1/2".parse::<HalfInt>().unwrap(), half(1));
        assert_eq!("-3/2".parse::<HalfInt>().unwrap(), half(-3));
        assert_eq!("1".parse::<HalfInt>().unwrap(), half(2));
        assert_eq!("0.5".parse::<HalfInt>().unwrap(), half(1));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!(half(3).to_string(), "3/2");
        assert_eq!(half(-4).to_string(), "-2");
    }

    #[test]
    fn grassmann_example() {
        let ctx = CycloContext::new(1).unwrap();
        let rep = build_glq2(&ctx, half(1), ctx.one(), ctx.one()).unwrap();
        // q^(1/2) = i for q = -1
        assert_eq!(ctx.q_half_power(1), ctx.omega_pow(2));
        let i = ctx.q_half_power(1);
        assert_eq!(rep.a.matmul(&rep.b), rep.b.matmul(&rep.a).scale(&i));
        assert!(rep.b.commutator(&rep.c).is_zero());
        assert_eq!(rep.qdet, -ctx.q_half_power(-1));
    }

    #[test]
    fn relations_sweep() {
        for p in 1..=5 {
            let ctx = CycloContext::new(p).unwrap();
            for alpha in [half(0), half(1), half(2), half(-3)] {
                let beta = ctx.int(2) + ctx.omega_pow(1);
                let gamma = ctx.rational(num_rational::BigRational::new((-3).into(), 5.into()));
                let rep = build_glq2(&ctx, alpha, beta, gamma).unwrap();
                let report = check_glq2_relations(&rep);
                assert!(report.all_passed(), "p = {p}, α = {alpha}: {report:?}");
            }
        }
    }

    #[test]
    fn special_linear() {
        let ctx = CycloContext::new(2).unwrap();
        let rep = build_slq2(&ctx, half(0), ctx.one()).unwrap();
        assert_eq!(rep.gamma, -ctx.q_half_power(1));
        assert_eq!(rep.qdet, ctx.one());
        let rep = build_slq2(&ctx, half(1), ctx.int(2)).unwrap();
        assert_eq!(rep.qdet, ctx.one());
        assert_eq!(rep.qdet_matrix(), ExactMatrix::identity(3));
        assert!(check_glq2_relations(&rep).all_passed());
    }

    #[test]
    fn perturbation_is_detected() {
        let ctx = CycloContext::new(3).unwrap();
        let rep = build_glq2(&ctx, half(1), ctx.int(3), ctx.omega_pow(5)).unwrap();
        let report = check_glq2_relations(&rep.perturbed());
        assert!(!report.get("[a, d] = (q^(1/2) - q^(-1/2)) bc").unwrap().passed);
    }

    #[test]
    fn zero_parameters() {
        let ctx = CycloContext::new(2).unwrap();
        assert_eq!(
            build_glq2(&ctx, half(0), ctx.zero(), ctx.one()).unwrap_err(),
            Error::ZeroParameter("beta")
        );
        assert_eq!(
            build_glq2(&ctx, half(0), ctx.one(), ctx.zero()).unwrap_err(),
            Error::ZeroParameter("gamma")
        );
        assert!(build_slq2(&ctx, half(0), ctx.zero()).is_err());
    }
}
