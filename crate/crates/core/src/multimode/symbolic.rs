//! Normal ordering in the θ/θ̄ subalgebra.
//!
//! Words are rewritten into the canonical order θ_1 θ̄_1 θ_2 θ̄_2 … using
//! `X Y = q^c Y X` with
//!
//! * θ_i θ_j = q^(ε_ij + δ_ij) θ_j θ_i, and likewise for θ̄,
//! * θ̄_i θ_j = q^(-ε_ij) θ_j θ̄_i,
//!
//! where ε_ij = +1 for i > j and -1 otherwise. Any exponent above p kills the
//! monomial.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multimode::{epsilon, Kind, Symbol};
use crate::qarith::{CycloContext, CycloElement, Field};
use crate::scalar::Scalar;

/// Exponents laid out as `[n_1, m_1, n_2, m_2, …]` for θ_i^(n_i) θ̄_i^(m_i).
pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct PGMonomial<S> {
    pub coeff: S,
    pub exps: Exponents,
}

/// A sum of canonically ordered monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PGPolynomial<S> {
    modes: usize,
    terms: BTreeMap<Exponents, S>,
}

impl<S: Scalar> PGPolynomial<S> {
    pub fn zero(modes: usize) -> Self {
        PGPolynomial {
            modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &S)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<PGMonomial<S>> {
        self.terms
            .iter()
            .map(|(e, c)| PGMonomial {
                coeff: c.clone(),
                exps: e.clone(),
            })
            .collect()
    }

    /// Coefficient of the given exponent configuration.
    pub fn coeff(&self, exps: &[u32]) -> S {
        self.terms.get(exps).cloned().unwrap_or_else(S::zero)
    }

    /// Adds `c` to the coefficient of `exps`, dropping it if it cancels.
    pub fn add_term(&mut self, exps: Exponents, c: S) {
        debug_assert_eq!(exps.len(), 2 * self.modes);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(slot) => {
                let sum = slot.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.modes);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Total degree of each monomial is the sum of its exponents.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        let mut out = Self::zero(self.modes);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == degree {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PGPolynomial<T> {
        let mut out = PGPolynomial::zero(self.modes);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

/// The normal-ordering engine for a fixed p and number of modes.
#[derive(Clone, Debug)]
pub struct PGAlgebra<S> {
    p: usize,
    modes: usize,
    q_powers: Vec<S>,
}

impl PGAlgebra<CycloElement> {
    pub fn exact(ctx: &Arc<CycloContext>, modes: usize) -> Self {
        PGAlgebra::new(ctx.p(), modes, ctx.q())
    }
}

impl PGAlgebra<Complex64> {
    pub fn embedded(ctx: &Arc<CycloContext>, modes: usize) -> Self {
        PGAlgebra::new(ctx.p(), modes, ctx.embed(&ctx.q()))
    }
}

impl<S: Scalar> PGAlgebra<S> {
    /// `q` must be a primitive (p+1)-th root of unity in `S`.
    pub fn new(p: usize, modes: usize, q: S) -> Self {
        let mut q_powers = Vec::with_capacity(p + 1);
        let mut acc = S::one();
        for _ in 0..=p {
            q_powers.push(acc.clone());
            acc = acc * q.clone();
        }
        PGAlgebra { p, modes, q_powers }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn q_pow(&self, k: i64) -> S {
        let n = (self.p + 1) as i64;
        self.q_powers[k.rem_euclid(n) as usize].clone()
    }

    /// Exponent c in `X Y = q^c Y X` for canonical slots `x`, `y`.
    fn phase(&self, x: usize, y: usize) -> i64 {
        let (i, a) = (x / 2, x % 2);
        let (j, b) = (y / 2, y % 2);
        match (a, b) {
            _ if a == b => epsilon(i, j) + i64::from(i == j),
            (1, 0) => -epsilon(i, j),
            _ => epsilon(j, i),
        }
    }

    pub fn zero(&self) -> PGPolynomial<S> {
        PGPolynomial::zero(self.modes)
    }

    pub fn constant(&self, c: S) -> PGPolynomial<S> {
        let mut out = self.zero();
        out.add_term(vec![0; 2 * self.modes], c);
        out
    }

    pub fn one(&self) -> PGPolynomial<S> {
        self.constant(S::one())
    }

    /// The monomial `coeff · θ_1^(n_1) θ̄_1^(m_1) …`; zero if any exponent
    /// exceeds p.
    pub fn monomial(&self, exps: Exponents, coeff: S) -> PGPolynomial<S> {
        assert_eq!(exps.len(), 2 * self.modes, "exponent vector length");
        let mut out = self.zero();
        if exps.iter().all(|&e| e as usize <= self.p) {
            out.add_term(exps, coeff);
        }
        out
    }

    fn slot(&self, symbol: Symbol) -> Result<usize> {
        if symbol.mode >= self.modes {
            return Err(Error::RangeError {
                index: symbol.mode,
                max: self.modes.saturating_sub(1),
            });
        }
        match symbol.kind {
            Kind::Theta => Ok(2 * symbol.mode),
            Kind::ThetaBar => Ok(2 * symbol.mode + 1),
            Kind::Partial | Kind::PartialBar => Err(Error::UnsupportedSymbol(symbol.to_string())),
        }
    }

    /// `symbol^e` as a polynomial.
    pub fn power_of(&self, symbol: Symbol, e: u32) -> Result<PGPolynomial<S>> {
        let mut exps = vec![0; 2 * self.modes];
        exps[self.slot(symbol)?] = e;
        Ok(self.monomial(exps, S::one()))
    }

    pub fn generator(&self, symbol: Symbol) -> Result<PGPolynomial<S>> {
        self.power_of(symbol, 1)
    }

    pub fn mul(&self, a: &PGPolynomial<S>, b: &PGPolynomial<S>) -> PGPolynomial<S> {
        let mut out = self.zero();
        for (e1, c1) in &a.terms {
            'terms: for (e2, c2) in &b.terms {
                // Moving each factor of the right monomial left past the
                // factors of the left monomial that sit later in canonical
                // order.
                let mut phase = 0i64;
                for (x, &ex) in e1.iter().enumerate() {
                    if ex == 0 {
                        continue;
                    }
                    for (y, &ey) in e2.iter().enumerate().take(x) {
                        if ey != 0 {
                            phase += i64::from(ex) * i64::from(ey) * self.phase(x, y);
                        }
                    }
                }
                let mut exps = Vec::with_capacity(e1.len());
                for (x, y) in e1.iter().zip(e2) {
                    let s = x + y;
                    if s as usize > self.p {
                        continue 'terms;
                    }
                    exps.push(s);
                }
                out.add_term(exps, c1.clone() * c2.clone() * self.q_pow(phase));
            }
        }
        out
    }

    pub fn pow(&self, a: &PGPolynomial<S>, n: u32) -> PGPolynomial<S> {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a PGPolynomial<S>>) -> PGPolynomial<S> {
        factors
            .into_iter()
            .fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    /// Rewrites a word into canonical order by adjacent transpositions.
    pub fn normal_order(&self, word: &[Symbol]) -> Result<PGPolynomial<S>> {
        let mut slots = word
            .iter()
            .map(|s| self.slot(*s))
            .collect::<Result<Vec<_>>>()?;
        let mut phase = 0i64;
        let mut sorted = false;
        while !sorted {
            sorted = true;
            for k in 1..slots.len() {
                let (x, y) = (slots[k - 1], slots[k]);
                if x > y {
                    phase += self.phase(x, y);
                    slots.swap(k - 1, k);
                    sorted = false;
                }
            }
        }
        let mut exps = vec![0u32; 2 * self.modes];
        for s in slots {
            exps[s] += 1;
        }
        Ok(self.monomial(exps, self.q_pow(phase)))
    }

    /// Berezin integration over mode `mode`, with `weight` the value assigned
    /// to the canonical block θ^p θ̄^p of that mode.
    ///
    /// A block θ_j^p θ̄_j^p commutes with every θ_i and θ̄_i for i ≠ j (the
    /// two phases are q^(±p ε)), so it can be brought next to its
    /// differentials without a phase; all other exponent pairs integrate to
    /// zero.
    pub fn integrate_mode(&self, poly: &PGPolynomial<S>, mode: usize, weight: &S) -> PGPolynomial<S> {
        let p = self.p as u32;
        let mut out = self.zero();
        for (e, c) in &poly.terms {
            if e[2 * mode] == p && e[2 * mode + 1] == p {
                let mut rest = e.clone();
                rest[2 * mode] = 0;
                rest[2 * mode + 1] = 0;
                out.add_term(rest, c.clone() * weight.clone());
            }
        }
        out
    }

    /// Integrates the given modes, innermost (last listed) first.
    pub fn integrate_modes(&self, poly: &PGPolynomial<S>, modes: &[usize], weight: &S) -> PGPolynomial<S> {
        modes
            .iter()
            .rev()
            .fold(poly.clone(), |acc, &m| self.integrate_mode(&acc, m, weight))
    }

    /// Multiplies `factors` left to right and integrates each listed mode as
    /// soon as the last factor containing it has been absorbed.
    ///
    /// The remaining factors never touch an integrated mode and a full block
    /// commutes with everything else, so this equals integrating the complete
    /// product. Fails with `DimensionCap` if an intermediate product holds more
    /// than `term_cap` terms.
    pub fn integrate_product(
        &self,
        factors: &[PGPolynomial<S>],
        modes: &[usize],
        weight: &S,
        term_cap: usize,
    ) -> Result<PGPolynomial<S>> {
        let mut last = vec![None; self.modes];
        for (k, f) in factors.iter().enumerate() {
            for (e, _) in f.terms() {
                for (mode, slot) in last.iter_mut().enumerate() {
                    if e[2 * mode] != 0 || e[2 * mode + 1] != 0 {
                        *slot = Some(k);
                    }
                }
            }
        }
        let mut acc = self.one();
        for &mode in modes.iter().filter(|&&m| last[m].is_none()) {
            acc = self.integrate_mode(&acc, mode, weight);
        }
        for (k, f) in factors.iter().enumerate() {
            acc = self.mul(&acc, f);
            if acc.len() > term_cap {
                return Err(Error::DimensionCap {
                    needed: acc.len(),
                    cap: term_cap,
                });
            }
            for &mode in modes.iter().filter(|&&m| last[m] == Some(k)) {
                acc = self.integrate_mode(&acc, mode, weight);
            }
        }
        Ok(acc)
    }
}
