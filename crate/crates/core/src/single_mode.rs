//! The single-mode algebra `∂θ = 1 + qθ∂`, `θ^(p+1) = ∂^(p+1) = 0`, in the
//! ladder basis |0⟩, ..., |p⟩.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::qarith::{CycloContext, CycloElement, Field};
use crate::report::Report;
use crate::ExactMatrix;

/// The ladder representation with parameters β_1..β_p.
///
/// `θ|n⟩ = β_(n+1)|n+1⟩` and `∂|n⟩ = (n)_q/β_n |n-1⟩`.
#[derive(Clone, Debug)]
pub struct SingleModeRep {
    ctx: Arc<CycloContext>,
    betas: Vec<CycloElement>,
    pub theta: ExactMatrix,
    pub partial: ExactMatrix,
    /// `∂θ - θ∂`, diagonal with entries q^n.
    pub g: ExactMatrix,
    pub g_inv: ExactMatrix,
    /// diag(q^(n/2)).
    pub g_half: ExactMatrix,
    pub g_half_inv: ExactMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Theta,
    Partial,
}

impl SingleModeRep {
    /// Builds the representation; `betas` defaults to all ones.
    pub fn new(ctx: &Arc<CycloContext>, betas: Option<&[CycloElement]>) -> Result<Self> {
        let p = ctx.p();
        let betas: Vec<CycloElement> = match betas {
            None => vec![ctx.one(); p],
            Some(b) => {
                if b.len() != p {
                    return Err(Error::WrongLength {
                        expected: p,
                        got: b.len(),
                    });
                }
                if let Some(k) = b.iter().position(num_traits::Zero::is_zero) {
                    return Err(Error::ZeroBeta(k + 1));
                }
                b.iter().map(|x| ctx.attach(x.clone())).collect()
            }
        };
        let dim = p + 1;
        let theta = ExactMatrix::from_entries(dim, (0..p).map(|n| (n + 1, n, betas[n].clone())));
        let partial = ExactMatrix::from_entries(
            dim,
            (1..=p).map(|n| (n - 1, n, ctx.q_number(n) / betas[n - 1].clone())),
        );
        let g = &partial.matmul(&theta) - &theta.matmul(&partial);
        let g_inv = ExactMatrix::diagonal((0..dim).map(|n| ctx.q_pow(-(n as i64))).collect());
        let g_half = g_power_half(ctx, 1);
        let g_half_inv = g_power_half(ctx, -1);
        Ok(SingleModeRep {
            ctx: ctx.clone(),
            betas,
            theta,
            partial,
            g,
            g_inv,
            g_half,
            g_half_inv,
        })
    }

    pub fn ctx(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    pub fn p(&self) -> usize {
        self.ctx.p()
    }

    pub fn dim(&self) -> usize {
        self.ctx.p() + 1
    }

    pub fn betas(&self) -> &[CycloElement] {
        &self.betas
    }

    pub fn identity(&self) -> ExactMatrix {
        ExactMatrix::identity(self.dim())
    }

    /// g^(k/2) = diag(q^(kn/2)).
    pub fn g_power_half(&self, k: i64) -> ExactMatrix {
        g_power_half(&self.ctx, k)
    }

    /// g^k for integer k.
    pub fn g_power(&self, k: i64) -> ExactMatrix {
        g_power_half(&self.ctx, 2 * k)
    }

    /// ⟨0| ∂^n θ^m |0⟩.
    pub fn vacuum_pairing(&self, n: usize, m: usize) -> Result<CycloElement> {
        let p = self.p();
        for idx in [n, m] {
            if idx > p {
                return Err(Error::RangeError { index: idx, max: p });
            }
        }
        let op = self.partial.pow(n as u32).matmul(&self.theta.pow(m as u32));
        Ok(op.get(0, 0))
    }

    /// θ† = g^(-1/2)∂ and ∂† = θ g^(-1/2), with C = 1.
    pub fn conjugate(&self, which: Which) -> Result<ExactMatrix> {
        self.require_principal()?;
        Ok(match which {
            Which::Theta => self.g_half_inv.matmul(&self.partial),
            Which::Partial => self.theta.matmul(&self.g_half_inv),
        })
    }

    /// Norms ⟨n|n⟩ of the ladder states for the inner product in which the
    /// conjugation above is the matrix adjoint: [n]! / Π_(k<=n) |β_k|^2.
    pub fn gram(&self) -> Result<Vec<CycloElement>> {
        self.require_principal()?;
        let mut out = Vec::with_capacity(self.dim());
        let mut acc = self.ctx.one();
        out.push(acc.clone());
        for n in 1..=self.p() {
            let beta = &self.betas[n - 1];
            acc = acc * self.ctx.symmetric_q_number(n) / (beta * &beta.conj());
            out.push(acc.clone());
        }
        Ok(out)
    }

    /// The adjoint of an arbitrary operator, `G^(-1) M^H G`.
    ///
    /// Anti-linear and anti-multiplicative; maps θ to g^(-1/2)∂ and g^(1/2) to
    /// g^(-1/2).
    pub fn adjoint(&self, m: &ExactMatrix) -> Result<ExactMatrix> {
        let gram = self.gram()?;
        Ok(ExactMatrix::from_entries(
            m.dim(),
            m.entries()
                .map(|(i, j, v)| (j, i, v.conj() * gram[i].clone() / gram[j].clone()))
                .collect::<Vec<_>>(),
        ))
    }

    /// θ*θ - q^(1/2) θθ* = g^(-1/2) with θ* = θ†.
    pub fn check_q_oscillator(&self) -> Result<Report> {
        let theta_star = self.conjugate(Which::Theta)?;
        let lhs = &theta_star.matmul(&self.theta)
            - &self
                .theta
                .matmul(&theta_star)
                .scale(&self.ctx.q_half_power(1));
        let mut report = Report::new();
        report.push(
            "q-oscillator",
            lhs == self.g_half_inv,
            format!("p = {}", self.p()),
        );
        Ok(report)
    }

    /// Nilpotency, the defining relation, the commutation of ∂ with θ^i, and
    /// the automorphism g.
    pub fn check_relations(&self) -> Report {
        let p = self.p() as u32;
        let ctx = &self.ctx;
        let one = self.identity();
        let mut report = Report::new();

        report.push(
            "nilpotency",
            self.theta.pow(p + 1).is_zero()
                && self.partial.pow(p + 1).is_zero()
                && !self.theta.pow(p).is_zero()
                && !self.partial.pow(p).is_zero(),
            "θ^(p+1) = ∂^(p+1) = 0, θ^p ≠ 0 ≠ ∂^p",
        );

        let rhs = &one + &self.theta.matmul(&self.partial).scale(&ctx.q());
        report.push(
            "defining-relation",
            self.partial.matmul(&self.theta) == rhs,
            "∂θ = 1 + qθ∂",
        );

        let mut violations = Vec::new();
        for i in 1..=p {
            let lhs = self.partial.matmul(&self.theta.pow(i));
            let rhs = &self.theta.pow(i - 1).scale(&ctx.q_number(i as usize))
                + &self
                    .theta
                    .pow(i)
                    .matmul(&self.partial)
                    .scale(&ctx.q_pow(i as i64));
            if lhs != rhs {
                violations.push(format!("i = {i}"));
            }
        }
        report.push_violations("partial-theta-power", violations);

        let expected_g = ExactMatrix::diagonal((0..=p).map(|n| ctx.q_pow(n as i64)).collect());
        report.push("g-diagonal", self.g == expected_g, "g = diag(q^n)");
        report.push("g-order", self.g.pow(p + 1) == one, "g^(p+1) = 1");
        report.push(
            "g-half-square",
            self.g_half.matmul(&self.g_half) == self.g,
            "(g^(1/2))^2 = g",
        );
        report.push(
            "g-automorphism",
            self.g.matmul(&self.theta).matmul(&self.g_inv) == self.theta.scale(&ctx.q())
                && self.g.matmul(&self.partial).matmul(&self.g_inv)
                    == self.partial.scale(&ctx.q_pow(-1)),
            "gθg⁻¹ = qθ, g∂g⁻¹ = q⁻¹∂",
        );
        report.push(
            "g-half-commutation",
            self.g_half.matmul(&self.theta)
                == self.theta.matmul(&self.g_half).scale(&ctx.q_half_power(1)),
            "g^(1/2)θ = q^(1/2)θg^(1/2)",
        );
        report
    }

    fn require_principal(&self) -> Result<()> {
        if self.ctx.is_principal() {
            Ok(())
        } else {
            Err(Error::UnsupportedRoot(self.ctx.root_index()))
        }
    }
}

fn g_power_half(ctx: &Arc<CycloContext>, k: i64) -> ExactMatrix {
    ExactMatrix::diagonal(
        (0..=ctx.p())
            .map(|n| ctx.q_half_power(k * n as i64))
            .collect(),
    )
}

/// Builds the ladder representation; see [`SingleModeRep::new`].
pub fn build_rep(ctx: &Arc<CycloContext>, betas: Option<&[CycloElement]>) -> Result<SingleModeRep> {
    SingleModeRep::new(ctx, betas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    fn int_matrix(ctx: &Arc<CycloContext>, rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_dense(
            rows.iter()
                .map(|r| r.iter().map(|&v| ctx.int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn grassmann_case() {
        let ctx = CycloContext::new(1).unwrap();
        let rep = SingleModeRep::new(&ctx, None).unwrap();
        assert_eq!(rep.theta, int_matrix(&ctx, &[&[0, 0], &[1, 0]]));
        assert_eq!(rep.partial, int_matrix(&ctx, &[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn g_for_p2() {
        let ctx = CycloContext::new(2).unwrap();
        let rep = SingleModeRep::new(&ctx, None).unwrap();
        let q = ctx.q();
        assert_eq!(
            rep.g,
            ExactMatrix::diagonal(vec![ctx.one(), q.clone(), q.clone() * q])
        );
    }

    #[test]
    fn partial_annihilates_vacuum() {
        for p in 1..=5 {
            let ctx = CycloContext::new(p).unwrap();
            let rep = SingleModeRep::new(&ctx, None).unwrap();
            assert!((0..=p).all(|r| num_traits::Zero::is_zero(&rep.partial.get(r, 0))));
        }
    }

    #[test]
    fn beta_validation() {
        let ctx = CycloContext::new(2).unwrap();
        let err = SingleModeRep::new(&ctx, Some(&[ctx.one()])).unwrap_err();
        assert_eq!(err, Error::WrongLength { expected: 2, got: 1 });
        let err = SingleModeRep::new(&ctx, Some(&[ctx.one(), ctx.zero()])).unwrap_err();
        assert_eq!(err, Error::ZeroBeta(2));
    }

    #[test]
    fn vacuum_pairing_examples() {
        let ctx = CycloContext::new(2).unwrap();
        let rep = SingleModeRep::new(&ctx, None).unwrap();
        assert!(num_traits::Zero::is_zero(&rep.vacuum_pairing(1, 2).unwrap()));
        assert_eq!(rep.vacuum_pairing(0, 0).unwrap(), ctx.one());
        assert_eq!(rep.vacuum_pairing(2, 2).unwrap(), ctx.one() + ctx.q());
        assert_eq!(
            rep.vacuum_pairing(3, 0).unwrap_err(),
            Error::RangeError { index: 3, max: 2 }
        );
    }

    #[test]
    fn conjugation_p1() {
        let ctx = CycloContext::new(1).unwrap();
        let rep = SingleModeRep::new(&ctx, None).unwrap();
        // g^(-1/2) = diag(1, -i) multiplies row 1 of ∂, which is empty.
        let theta_dag = rep.conjugate(Which::Theta).unwrap();
        assert_eq!(theta_dag, int_matrix(&ctx, &[&[0, 1], &[0, 0]]));
        let partial_dag = rep.conjugate(Which::Partial).unwrap();
        assert_eq!(
            partial_dag,
            ExactMatrix::from_entries(2, [(1, 0, ctx.one())])
        );
    }

    #[test]
    fn conjugation_is_an_involution() {
        for p in 1..=5 {
            let ctx = CycloContext::new(p).unwrap();
            let betas: Vec<_> = (1..=p as i64).map(|k| ctx.int(k) + ctx.omega_pow(k)).collect();
            let rep = SingleModeRep::new(&ctx, Some(&betas)).unwrap();
            let theta_dag = rep.conjugate(Which::Theta).unwrap();
            let partial_dag = rep.conjugate(Which::Partial).unwrap();
            assert_eq!(rep.adjoint(&rep.theta).unwrap(), theta_dag);
            assert_eq!(rep.adjoint(&rep.partial).unwrap(), partial_dag);
            assert_eq!(rep.adjoint(&theta_dag).unwrap(), rep.theta);
            assert_eq!(rep.adjoint(&rep.g).unwrap(), rep.g_inv);
            assert_eq!(rep.adjoint(&rep.g_half).unwrap(), rep.g_half_inv);
        }
    }

    #[test]
    fn non_principal_root_is_gated() {
        let ctx = CycloContext::with_root(4, 2).unwrap();
        let rep = SingleModeRep::new(&ctx, None).unwrap();
        assert_eq!(
            rep.conjugate(Which::Theta).unwrap_err(),
            Error::UnsupportedRoot(2)
        );
        assert!(rep.check_q_oscillator().is_err());
        // The algebra itself is fine at any primitive root.
        assert!(rep.check_relations().all_passed());
    }

    #[test]
    fn q_oscillator_holds() {
        for p in 1..=6 {
            let ctx = CycloContext::new(p).unwrap();
            let rep = SingleModeRep::new(&ctx, None).unwrap();
            assert!(rep.check_q_oscillator().unwrap().all_passed(), "p = {p}");
        }
    }

    #[test]
    fn relations_with_nontrivial_betas() {
        let ctx = CycloContext::new(3).unwrap();
        let betas = vec![ctx.int(2), ctx.q(), CycloElement::from_ratio(-1, 3)];
        let rep = SingleModeRep::new(&ctx, Some(&betas)).unwrap();
        let report = rep.check_relations();
        assert!(report.all_passed(), "{report:?}");
        for n in 0..=3 {
            for m in 0..=3 {
                let expected = if n == m { ctx.q_factorial(n) } else { CycloElement::from_i64(0) };
                assert_eq!(rep.vacuum_pairing(n, m).unwrap(), expected);
            }
        }
    }
}
