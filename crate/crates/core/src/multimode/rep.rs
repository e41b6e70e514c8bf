use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multimode::{epsilon, Kind, Symbol};
use crate::qarith::{CycloContext, CycloElement, Field};
use crate::report::Report;
use crate::single_mode::SingleModeRep;
use crate::ExactMatrix;

pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// Exponent pair of G^a = g^(a¹) ⊗ g^(a²).
pub type SignVector = [i64; 2];

/// Generators of the 2N-mode algebra realized on (C^(p+1))^(⊗2N).
///
/// For mode i, θ_i = G^(a_1) ⊗ … ⊗ G^(a_(i-1)) ⊗ (θ ⊗ 1) ⊗ I ⊗ …, with θ̄_i
/// using the b vectors and (g ⊗ θ), and the derivatives using the inverse
/// grading and (∂ ⊗ 1), (g⁻¹ ⊗ ∂).
#[derive(Clone, Debug)]
pub struct MultiModeRep {
    ctx: Arc<CycloContext>,
    modes: usize,
    a_vectors: Vec<SignVector>,
    b_vectors: Vec<SignVector>,
    theta: Vec<ExactMatrix>,
    theta_bar: Vec<ExactMatrix>,
    partial: Vec<ExactMatrix>,
    partial_bar: Vec<ExactMatrix>,
}

impl MultiModeRep {
    /// The fixed choice a_i = (1, -1), b_i = -a_i.
    pub fn new(ctx: &Arc<CycloContext>, modes: usize) -> Result<Self> {
        Self::with_cap(ctx, modes, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(ctx: &Arc<CycloContext>, modes: usize, cap: usize) -> Result<Self> {
        let a = vec![[1, -1]; modes];
        let b = vec![[-1, 1]; modes];
        Self::with_signs(ctx, modes, a, b, cap)
    }

    pub fn with_signs(
        ctx: &Arc<CycloContext>,
        modes: usize,
        a_vectors: Vec<SignVector>,
        b_vectors: Vec<SignVector>,
        cap: usize,
    ) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidParameter("at least one mode is required".into()));
        }
        for v in [&a_vectors, &b_vectors] {
            if v.len() != modes {
                return Err(Error::WrongLength {
                    expected: modes,
                    got: v.len(),
                });
            }
            if v.iter().flatten().any(|s| s.abs() != 1) {
                return Err(Error::InvalidParameter("sign vector entries must be ±1".into()));
            }
        }
        let needed = (ctx.p() + 1)
            .checked_pow(2 * modes as u32)
            .unwrap_or(usize::MAX);
        if needed > cap {
            return Err(Error::DimensionCap { needed, cap });
        }

        let single = SingleModeRep::new(ctx, None)?;
        let one = single.identity();
        let pair_identity = one.kron(&one);
        let grading = |v: &SignVector, sign: i64| {
            single
                .g_power(sign * v[0])
                .kron(&single.g_power(sign * v[1]))
        };
        let embed = |prefix: &[SignVector], sign: i64, core: ExactMatrix, i: usize| {
            let mut m = ExactMatrix::identity(1);
            for v in &prefix[..i] {
                m = m.kron(&grading(v, sign));
            }
            m = m.kron(&core);
            for _ in i + 1..modes {
                m = m.kron(&pair_identity);
            }
            m
        };

        let mut theta = Vec::with_capacity(modes);
        let mut theta_bar = Vec::with_capacity(modes);
        let mut partial = Vec::with_capacity(modes);
        let mut partial_bar = Vec::with_capacity(modes);
        for i in 0..modes {
            theta.push(embed(&a_vectors, 1, single.theta.kron(&one), i));
            theta_bar.push(embed(&b_vectors, 1, single.g.kron(&single.theta), i));
            partial.push(embed(&a_vectors, -1, single.partial.kron(&one), i));
            partial_bar.push(embed(&b_vectors, -1, single.g_inv.kron(&single.partial), i));
        }

        Ok(MultiModeRep {
            ctx: ctx.clone(),
            modes,
            a_vectors,
            b_vectors,
            theta,
            theta_bar,
            partial,
            partial_bar,
        })
    }

    pub fn ctx(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.theta[0].dim()
    }

    pub fn a_vectors(&self) -> &[SignVector] {
        &self.a_vectors
    }

    pub fn b_vectors(&self) -> &[SignVector] {
        &self.b_vectors
    }

    pub fn generator(&self, symbol: Symbol) -> &ExactMatrix {
        let list = match symbol.kind {
            Kind::Theta => &self.theta,
            Kind::ThetaBar => &self.theta_bar,
            Kind::Partial => &self.partial,
            Kind::PartialBar => &self.partial_bar,
        };
        &list[symbol.mode]
    }

    pub fn identity(&self) -> ExactMatrix {
        ExactMatrix::identity(self.dim())
    }

    /// Ordered product of generator matrices.
    pub fn word_matrix(&self, word: &[Symbol]) -> ExactMatrix {
        word.iter()
            .fold(self.identity(), |acc, s| acc.matmul(self.generator(*s)))
    }
}

struct Family {
    name: &'static str,
    left: Kind,
    right: Kind,
    /// Exponent of q in `left_i right_j = q^e right_j left_i (+ δ_ij)`.
    exponent: fn(usize, usize) -> i64,
    inhomogeneous: bool,
}

fn delta(i: usize, j: usize) -> i64 {
    i64::from(i == j)
}

const FAMILIES: [Family; 10] = [
    Family {
        name: "theta-theta",
        left: Kind::Theta,
        right: Kind::Theta,
        exponent: |i, j| epsilon(i, j) + delta(i, j),
        inhomogeneous: false,
    },
    Family {
        name: "partial-partial",
        left: Kind::Partial,
        right: Kind::Partial,
        exponent: |i, j| epsilon(i, j) + delta(i, j),
        inhomogeneous: false,
    },
    Family {
        name: "partial-theta",
        left: Kind::Partial,
        right: Kind::Theta,
        exponent: |i, j| -epsilon(i, j),
        inhomogeneous: true,
    },
    Family {
        name: "thetabar-thetabar",
        left: Kind::ThetaBar,
        right: Kind::ThetaBar,
        exponent: |i, j| epsilon(i, j) + delta(i, j),
        inhomogeneous: false,
    },
    Family {
        name: "partialbar-partialbar",
        left: Kind::PartialBar,
        right: Kind::PartialBar,
        exponent: |i, j| epsilon(i, j) + delta(i, j),
        inhomogeneous: false,
    },
    Family {
        name: "partialbar-thetabar",
        left: Kind::PartialBar,
        right: Kind::ThetaBar,
        exponent: |i, j| -epsilon(i, j),
        inhomogeneous: true,
    },
    Family {
        name: "thetabar-theta",
        left: Kind::ThetaBar,
        right: Kind::Theta,
        exponent: |i, j| -epsilon(i, j),
        inhomogeneous: false,
    },
    Family {
        name: "partialbar-partial",
        left: Kind::PartialBar,
        right: Kind::Partial,
        exponent: |i, j| -epsilon(i, j),
        inhomogeneous: false,
    },
    Family {
        name: "partialbar-theta",
        left: Kind::PartialBar,
        right: Kind::Theta,
        exponent: epsilon,
        inhomogeneous: false,
    },
    Family {
        name: "thetabar-partial",
        left: Kind::ThetaBar,
        right: Kind::Partial,
        exponent: epsilon,
        inhomogeneous: false,
    },
];

/// Exact check of every pairwise relation of the fixed multimode algebra,
/// nilpotency of each generator, and the plane relations for each mode.
pub fn check_relations(rep: &MultiModeRep) -> Report {
    let ctx = rep.ctx();
    let n = rep.modes();
    let one = rep.identity();
    let mut report = Report::new();

    for fam in &FAMILIES {
        let mut violations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let x = rep.generator(Symbol::new(fam.left, i));
                let y = rep.generator(Symbol::new(fam.right, j));
                let lhs = x.matmul(y);
                let mut rhs = y.matmul(x).scale(&ctx.q_pow((fam.exponent)(i, j)));
                if fam.inhomogeneous && i == j {
                    rhs = &rhs + &one;
                }
                if lhs != rhs {
                    violations.push(format!("i={},j={}", i + 1, j + 1));
                }
            }
        }
        report.push_violations(fam.name, violations);
    }

    let p = ctx.p() as u32;
    let mut violations = Vec::new();
    for i in 0..n {
        for kind in Kind::ALL {
            let x = rep.generator(Symbol::new(kind, i));
            if !x.pow(p + 1).is_zero() || x.pow(p).is_zero() {
                violations.push(Symbol::new(kind, i).to_string());
            }
        }
    }
    report.push_violations("nilpotency", violations);

    let q = ctx.q();
    let mut violations = Vec::new();
    for i in 0..n {
        let th = rep.generator(Symbol::new(Kind::Theta, i));
        let tb = rep.generator(Symbol::new(Kind::ThetaBar, i));
        let d = rep.generator(Symbol::new(Kind::Partial, i));
        let db = rep.generator(Symbol::new(Kind::PartialBar, i));
        let checks: [(&str, bool); 6] = [
            ("θ̄θ = qθθ̄", tb.matmul(th) == th.matmul(tb).scale(&q)),
            ("∂θ̄ = qθ̄∂", d.matmul(tb) == tb.matmul(d).scale(&q)),
            ("∂̄θ̄ = 1 + qθ̄∂̄", db.matmul(tb) == &one + &tb.matmul(db).scale(&q)),
            ("θ∂̄ = q∂̄θ", th.matmul(db) == db.matmul(th).scale(&q)),
            ("∂̄∂ = q∂∂̄", db.matmul(d) == d.matmul(db).scale(&q)),
            ("∂θ = 1 + qθ∂", d.matmul(th) == &one + &th.matmul(d).scale(&q)),
        ];
        for (name, ok) in checks {
            if !ok {
                violations.push(format!("mode {}: {name}", i + 1));
            }
        }
    }
    report.push_violations("plane-relations", violations);
    report
}

/// Builds the representation with optional sign vectors (defaults as in
/// [`MultiModeRep::new`]).
pub fn build_multimode(
    ctx: &Arc<CycloContext>,
    modes: usize,
    a_vectors: Option<Vec<SignVector>>,
    b_vectors: Option<Vec<SignVector>>,
    cap: usize,
) -> Result<MultiModeRep> {
    let a = a_vectors.unwrap_or_else(|| vec![[1, -1]; modes]);
    let b = b_vectors.unwrap_or_else(|| a.iter().map(|v| [-v[0], -v[1]]).collect());
    MultiModeRep::with_signs(ctx, modes, a, b, cap)
}

/// The matrix of `coeff · θ_1^(n_1) θ̄_1^(m_1) θ_2^(n_2) …`.
pub fn monomial_matrix(rep: &MultiModeRep, exps: &[u32], coeff: &CycloElement) -> ExactMatrix {
    let mut m = rep.identity();
    for (k, &e) in exps.iter().enumerate() {
        let kind = if k % 2 == 0 { Kind::Theta } else { Kind::ThetaBar };
        m = m.matmul(&rep.generator(Symbol::new(kind, k / 2)).pow(e));
    }
    m.scale(coeff)
}
