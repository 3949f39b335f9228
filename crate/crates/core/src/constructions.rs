//! Addressing-based function families, their closed-form spectra, and the
//! parameter settings that realize prescribed (rank, sparsity, entropy) targets.
//!
//! Variable order: addressing bits first (little-endian), then the target
//! blocks in address order, then auxiliary bits inside each block. Address
//! `j` selects block `j`; the all-`+1` address selects block 0.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::function::{check_arity, BooleanFunction, SparseSpectrum, Spectrum};
use crate::gf2::{Mask, MAX_MASK_BITS};
use crate::measures::{profile, profile_sparse, SpectralProfile};
use crate::rational::{to_f64, Rational};
use crate::{max_arity, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    And { n: usize },
    Parity { n: usize },
    BentIp { n: usize },
    Addressing { t: usize },
    AdTt { t: usize, tprime: usize },
    AdTta { t: usize, tprime: usize, a: usize },
    Ab { tprime: usize, ell: usize },
    Aab { t: usize, tprime: usize, ell: usize },
    Mand { tprime: usize, p: usize },
    Mad { t: usize, tprime: usize, p: usize },
    Composed { t: usize, inner: Box<FamilySpec> },
}

fn log2_exact(name: &str, v: usize) -> Result<usize> {
    if v == 0 || !v.is_power_of_two() {
        return Err(Error::InvalidSpec(format!("{name} = {v} must be a power of two")));
    }
    Ok(v.trailing_zeros() as usize)
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidSpec(msg()))
    }
}

fn check_t(t: usize) -> Result<usize> {
    let s = log2_exact("t", t)?;
    require(t >= 2, || format!("t = {t} must be at least 2"))?;
    Ok(s)
}

fn check_ell(ell: usize) -> Result<usize> {
    let l = log2_exact("ell", ell)?;
    require(l >= 2 && l % 2 == 0, || format!("log2(ell) = {l} must be even and at least 2"))?;
    Ok(l)
}

fn check_ab(tprime: usize, ell: usize) -> Result<(usize, usize)> {
    let m = log2_exact("tprime", tprime)?;
    require(tprime > 3, || format!("tprime = {tprime} must exceed 3"))?;
    Ok((m, check_ell(ell)?))
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::And { .. } => "and",
            FamilySpec::Parity { .. } => "parity",
            FamilySpec::BentIp { .. } => "bent_ip",
            FamilySpec::Addressing { .. } => "addressing",
            FamilySpec::AdTt { .. } => "ad_tt",
            FamilySpec::AdTta { .. } => "ad_tta",
            FamilySpec::Ab { .. } => "ab",
            FamilySpec::Aab { .. } => "aab",
            FamilySpec::Mand { .. } => "mand",
            FamilySpec::Mad { .. } => "mad",
            FamilySpec::Composed { .. } => "composed",
        }
    }

    /// Checks the family constraints and returns the arity.
    pub fn validate(&self) -> Result<usize> {
        let n = match *self {
            FamilySpec::And { n } | FamilySpec::Parity { n } => {
                require(n >= 1, || "n must be at least 1".into())?;
                n
            }
            FamilySpec::BentIp { n } => {
                require(n >= 2 && n % 2 == 0, || format!("bent arity {n} must be even and at least 2"))?;
                n
            }
            FamilySpec::Addressing { t } => check_t(t)? + t,
            FamilySpec::AdTt { t, tprime } => {
                let s = check_t(t)?;
                let m = log2_exact("tprime", tprime)?;
                require(tprime >= 2, || "tprime must be at least 2".into())?;
                s + t * m
            }
            FamilySpec::AdTta { t, tprime, a } => {
                let s = check_t(t)?;
                let m = log2_exact("tprime", tprime)?;
                let la = log2_exact("a", a)?;
                require(tprime >= 2, || "tprime must be at least 2".into())?;
                require(a >= 2 * tprime, || format!("a = {a} must be at least 2·tprime = {}", 2 * tprime))?;
                s + la + (t - 1) * m
            }
            FamilySpec::Ab { tprime, ell } => {
                let (m, l) = check_ab(tprime, ell)?;
                m + l
            }
            FamilySpec::Aab { t, tprime, ell } => {
                let s = check_t(t)?;
                let (m, l) = check_ab(tprime, ell)?;
                s + t * (m + l)
            }
            FamilySpec::Mand { tprime, p } => {
                let m = log2_exact("tprime", tprime)?;
                require(tprime >= 2, || "tprime must be at least 2".into())?;
                require(p >= 1, || "p must be at least 1".into())?;
                m + p
            }
            FamilySpec::Mad { t, tprime, p } => {
                let s = check_t(t)?;
                let m = log2_exact("tprime", tprime)?;
                require(tprime >= 2, || "tprime must be at least 2".into())?;
                require(p >= 2 && p <= (t - 1) * m, || {
                    format!("p = {p} must satisfy 2 <= p <= (t-1)·log2(tprime) = {}", (t - 1) * m)
                })?;
                s + t * m
            }
            FamilySpec::Composed { t, ref inner } => {
                check_t(t)? + t * inner.validate()?
            }
        };
        Ok(n)
    }

    pub fn arity(&self) -> Result<usize> {
        self.validate()
    }

    /// Truth table by direct evaluation.
    pub fn make(&self) -> Result<BooleanFunction> {
        let n = self.validate()?;
        check_arity("family", n)?;
        match *self {
            FamilySpec::And { n } => BooleanFunction::and(n),
            FamilySpec::Parity { n } => BooleanFunction::parity(n, (1 << n) - 1),
            FamilySpec::BentIp { n } => inner_product(n),
            FamilySpec::Addressing { t } => compose(t, &vec![dictator(); t]),
            FamilySpec::AdTt { t, tprime } => {
                let g = BooleanFunction::and(tprime.trailing_zeros() as usize)?;
                compose(t, &vec![g; t])
            }
            FamilySpec::AdTta { t, tprime, a } => {
                let mut blocks = vec![BooleanFunction::and(a.trailing_zeros() as usize)?];
                blocks.extend(std::iter::repeat(BooleanFunction::and(tprime.trailing_zeros() as usize)?).take(t - 1));
                compose(t, &blocks)
            }
            FamilySpec::Ab { tprime, ell } => {
                and_with_twisted_first(tprime.trailing_zeros() as usize, &inner_product(ell.trailing_zeros() as usize)?)
            }
            FamilySpec::Aab { t, tprime, ell } => {
                let g = FamilySpec::Ab { tprime, ell }.make()?;
                compose(t, &vec![g; t])
            }
            FamilySpec::Mand { tprime, p } => {
                and_with_twisted_first(tprime.trailing_zeros() as usize, &BooleanFunction::and(p)?)
            }
            FamilySpec::Mad { t, tprime, p } => modified_addressing(t, tprime, p),
            FamilySpec::Composed { t, ref inner } => {
                let g = inner.make()?;
                compose(t, &vec![g; t])
            }
        }
    }

    /// Nonzero Fourier coefficients assembled from the closed-form
    /// expansions, without building a truth table.
    pub fn closed_form_sparse(&self) -> Result<SparseSpectrum> {
        let n = self.validate()?;
        if n > MAX_MASK_BITS {
            return Err(Error::SizeGuard { what: "parity mask width", n, max: MAX_MASK_BITS });
        }
        match *self {
            FamilySpec::And { n } => Ok(and_spectrum(n)),
            FamilySpec::Parity { n } => Ok(SparseSpectrum::from_terms(n, [(mask_below(n), Rational::one())])),
            FamilySpec::BentIp { n } => Ok(inner_product_spectrum(n)),
            FamilySpec::Addressing { t } => Ok(compose_spectrum(t, &vec![dictator_spectrum(); t])),
            FamilySpec::AdTt { t, tprime } => {
                Ok(compose_spectrum(t, &vec![and_spectrum(tprime.trailing_zeros() as usize); t]))
            }
            FamilySpec::AdTta { t, tprime, a } => {
                let mut blocks = vec![and_spectrum(a.trailing_zeros() as usize)];
                blocks.extend(std::iter::repeat(and_spectrum(tprime.trailing_zeros() as usize)).take(t - 1));
                Ok(compose_spectrum(t, &blocks))
            }
            FamilySpec::Ab { tprime, ell } => Ok(twisted_and_spectrum(
                tprime.trailing_zeros() as usize,
                &inner_product_spectrum(ell.trailing_zeros() as usize),
            )),
            FamilySpec::Aab { t, tprime, ell } => {
                let g = FamilySpec::Ab { tprime, ell }.closed_form_sparse()?;
                Ok(compose_spectrum(t, &vec![g; t]))
            }
            FamilySpec::Mand { tprime, p } => {
                Ok(twisted_and_spectrum(tprime.trailing_zeros() as usize, &and_spectrum(p)))
            }
            FamilySpec::Mad { t, tprime, p } => {
                let s = t.trailing_zeros() as usize;
                let m = tprime.trailing_zeros() as usize;
                // block 0 reads y_0 and then u, which starts block 1
                let first = twisted_and_spectrum(m, &and_spectrum(p));
                let rest = and_spectrum(m);
                let mut blocks = vec![(&first, s)];
                blocks.extend((1..t).map(|j| (&rest, s + j * m)));
                Ok(compose_spectrum_at(t, &blocks, n))
            }
            FamilySpec::Composed { t, ref inner } => {
                let g = inner.closed_form_sparse()?;
                Ok(compose_spectrum(t, &vec![g; t]))
            }
        }
    }

    /// Dense integer spectrum from the closed forms.
    pub fn closed_form_spectrum(&self) -> Result<Spectrum> {
        self.closed_form_sparse()?.to_dense()
    }

    /// Profile from the truth table when the arity fits the guard, otherwise
    /// from the closed-form spectrum (then without F2-degree).
    pub fn measure(&self) -> Result<SpectralProfile> {
        let n = self.validate()?;
        if n <= max_arity() {
            Ok(profile(&self.make()?))
        } else {
            Ok(profile_sparse(&self.closed_form_sparse()?))
        }
    }
}

fn mask_below(n: usize) -> Mask {
    crate::gf2::full_mask(n)
}

fn dictator() -> BooleanFunction {
    BooleanFunction::from_word(1, 0b10)
}

/// `IP(z) = (−1)^{Σ b_{2i−1} b_{2i}}` on `n` (even) variables.
pub fn inner_product(n: usize) -> Result<BooleanFunction> {
    let pairs = (0..n / 2).fold(0usize, |acc, i| acc | (1 << (2 * i)));
    BooleanFunction::from_fn(n, |idx| ((idx & (idx >> 1)) & pairs).count_ones() & 1 == 1)
}

/// `AD_t(x, g_0(y_0), …, g_{t−1}(y_{t−1}))`.
pub fn compose(t: usize, blocks: &[BooleanFunction]) -> Result<BooleanFunction> {
    let s = log2_exact("t", t)?;
    if blocks.len() != t {
        return Err(Error::InvalidSpec(format!("{} inner functions for t = {t}", blocks.len())));
    }
    let mut offsets = Vec::with_capacity(t);
    let mut off = s;
    for g in blocks {
        offsets.push(off);
        off += g.n();
    }
    check_arity("composition", off)?;
    BooleanFunction::from_fn(off, |idx| {
        let a = idx & (t - 1);
        let g = &blocks[a];
        g.bit((idx >> offsets[a]) & ((1 << g.n()) - 1))
    })
}

/// `AD_t ∘ g` with the same inner function in every block.
pub fn compose_addressing(t: usize, g: &BooleanFunction) -> Result<BooleanFunction> {
    compose(t, &vec![g.clone(); t])
}

/// `AND_m(y_1·g(z), y_2, …, y_m)` with `y` first, then `z`.
pub fn and_with_twisted_first(m: usize, g: &BooleanFunction) -> Result<BooleanFunction> {
    let all = (1usize << m) - 1;
    BooleanFunction::from_fn(m + g.n(), |idx| {
        let y = idx & all;
        let w = y ^ (g.bit(idx >> m) as usize);
        w == all
    })
}

/// `AD_t` whose block 0 is `mAND(y_0, u)` with `u` the first `p` variables of
/// blocks `1..t`, and every other block `AND_{log t'}`.
fn modified_addressing(t: usize, tprime: usize, p: usize) -> Result<BooleanFunction> {
    let s = t.trailing_zeros() as usize;
    let m = tprime.trailing_zeros() as usize;
    let all = (1usize << m) - 1;
    let pall = (1usize << p) - 1;
    BooleanFunction::from_fn(s + t * m, |idx| {
        let a = idx & (t - 1);
        let y = (idx >> (s + a * m)) & all;
        if a == 0 {
            let u = (idx >> (s + m)) & pall;
            (y ^ (u == pall) as usize) == all
        } else {
            y == all
        }
    })
}

fn sign_of_size(size: u32) -> i64 {
    if size % 2 == 0 {
        -1
    } else {
        1
    }
}

/// `AND_n`: `f̂(∅) = 1 − 2^{1−n}`, otherwise `2^{1−n}(−1)^{|S|+1}`.
pub fn and_spectrum(n: usize) -> SparseSpectrum {
    let unit = Rational::new(2, 1) / Rational::from_integer(1 << n);
    let terms = (0..1u128 << n).map(|m| {
        if m == 0 {
            (m, Rational::one() - unit)
        } else {
            (m, unit * sign_of_size(m.count_ones()))
        }
    });
    SparseSpectrum::from_terms(n, terms)
}

/// Inner product on `n = 2m` variables: `2^{−m}(−1)^{Σ α_{2i−1}α_{2i}}`.
pub fn inner_product_spectrum(n: usize) -> SparseSpectrum {
    let mag = Rational::new(1, 1 << (n / 2));
    let pairs = (0..n / 2).fold(0u128, |acc, i| acc | (1 << (2 * i)));
    let terms = (0..1u128 << n).map(|a| {
        let neg = ((a & (a >> 1)) & pairs).count_ones() % 2 == 1;
        (a, if neg { -mag } else { mag })
    });
    SparseSpectrum::from_terms(n, terms)
}

fn dictator_spectrum() -> SparseSpectrum {
    SparseSpectrum::from_terms(1, [(1, Rational::one())])
}

/// Spectrum of `AD_t(x, g_0, …, g_{t−1})`:
/// `f̂(T ∪ S_j) = ĝ_j(S_j)(−1)^{|T ∩ bin(j)|}/t` for nonempty `S_j`, and the
/// pure address terms `Σ_j ĝ_j(∅)(−1)^{|T ∩ bin(j)|}/t`.
pub fn compose_spectrum(t: usize, blocks: &[SparseSpectrum]) -> SparseSpectrum {
    let mut placed = Vec::with_capacity(t);
    let mut off = t.trailing_zeros() as usize;
    for g in blocks {
        placed.push((g, off));
        off += g.n();
    }
    compose_spectrum_at(t, &placed, off)
}

/// As [`compose_spectrum`], with block `j` reading the contiguous variables
/// starting at its offset; blocks may overlap.
pub fn compose_spectrum_at(t: usize, blocks: &[(&SparseSpectrum, usize)], n: usize) -> SparseSpectrum {
    let s = t.trailing_zeros() as usize;
    let inv_t = Rational::new(1, t as i64);
    let sgn = |tm: u128, j: usize| if (tm & j as u128).count_ones() % 2 == 0 { 1 } else { -1 };
    let mut terms = Vec::new();
    for tm in 0..1u128 << s {
        let pure: Rational = blocks.iter().enumerate().map(|(j, (g, _))| g.get(0) * sgn(tm, j)).sum::<Rational>() * inv_t;
        terms.push((tm, pure));
        for (j, (g, off)) in blocks.iter().enumerate() {
            for &(m, v) in g.terms().iter().filter(|(m, _)| *m != 0) {
                terms.push((tm | (m << off), v * inv_t * sgn(tm, j)));
            }
        }
    }
    SparseSpectrum::from_terms(n, terms)
}

/// Spectrum of `AND_m(y_1·g(z), y_2, …)`: terms without `y_1` are those of
/// `AND_m`; terms with `y_1` multiply the AND coefficient by `ĝ(T)`.
pub fn twisted_and_spectrum(m: usize, g: &SparseSpectrum) -> SparseSpectrum {
    let a = and_spectrum(m);
    let mut terms = Vec::new();
    for &(s, v) in a.terms() {
        if s & 1 == 0 {
            terms.push((s, v));
        } else {
            for &(tm, w) in g.terms() {
                terms.push((s | (tm << m), v * w));
            }
        }
    }
    SparseSpectrum::from_terms(m + g.n(), terms)
}

/// Which target line or curve a witness realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `AD_{t,t′,a}` with prescribed `(r, k, k′)`.
    Kline,
    /// `AAB` with prescribed `(r, k, k′)`.
    KprimeCurve,
    /// `mAD` with prescribed `(r, k, k″)`.
    KdprimeCurve,
    /// `AD_{t,t′,a}` with prescribed `(r, k, k″)`.
    KdprimeLine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    R,
    K,
    Kprime,
    Kdprime,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedRange {
    pub measure: Measure,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeCheck {
    pub measure: Measure,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub spec: FamilySpec,
    pub ranges: Vec<ExpectedRange>,
}

/// Default two-sided sandwich constant.
pub const SANDWICH: f64 = 8.0;

/// Nearest power of two in log scale.
fn round_pow2(x: f64) -> usize {
    1usize << x.log2().round().max(0.0) as u32
}

fn out_of_range(msg: String) -> Error {
    Error::OutOfRange(msg)
}

fn around(measure: Measure, center: f64, c: f64) -> ExpectedRange {
    ExpectedRange { measure, lo: center / c, hi: center * c }
}

/// Instantiates the family for the given kind with the sandwich constant 8.
pub fn witness(kind: WitnessKind, rho: u64, kappa: u64, kappa_aux: u64) -> Result<Witness> {
    witness_with_factor(kind, rho, kappa, kappa_aux, SANDWICH)
}

/// Instantiates the family and declares the expected measure ranges.
///
/// Range centers carry the leading constants that the parameter formulas
/// fix exactly (for example `k(AAB) ≈ t²ℓt′/2 = 16κ`), so the sandwich only
/// absorbs rounding and lower-order terms.
pub fn witness_with_factor(kind: WitnessKind, rho: u64, kappa: u64, kappa_aux: u64, c: f64) -> Result<Witness> {
    let (r, k, x) = (rho as f64, kappa as f64, kappa_aux as f64);
    if kappa < 4 {
        return Err(out_of_range(format!("kappa = {kappa} is too small")));
    }
    let lk = k.log2();
    if r < lk {
        return Err(out_of_range(format!("rho = {rho} must be at least log2(kappa) = {lk:.3}")));
    }
    if r >= k.sqrt() {
        return Err(out_of_range(format!("rho = {rho} must be below sqrt(kappa) = {:.3}", k.sqrt())));
    }
    // rho = kappa^{1/2 − eps}
    let eps = 0.5 - r.log2() / lk;
    let (spec, ranges) = match kind {
        WitnessKind::Kline | WitnessKind::KdprimeLine => {
            if x > k {
                return Err(out_of_range(format!("kappa_aux = {kappa_aux} must not exceed kappa = {kappa}")));
            }
            let t = round_pow2(2.0 * r / lk).max(2);
            let tprime = round_pow2(k * lk * lk / (r * r));
            let a = round_pow2(2.0 * x * lk / r);
            if a < 2 * tprime {
                return Err(out_of_range(format!(
                    "kappa_aux = {kappa_aux} too small: a = {a} < 2·tprime = {} after rounding",
                    2 * tprime
                )));
            }
            let spec = FamilySpec::AdTta { t, tprime, a };
            let entropy = if kind == WitnessKind::Kline { Measure::Kprime } else { Measure::Kdprime };
            let delta = (r / lk).powi(2) / k;
            let ranges = vec![
                ExpectedRange { measure: Measure::R, lo: eps * r / c, hi: c * r },
                // k ≈ t²t′ + ta = 4κ + 4κ_aux
                around(Measure::K, 4.0 * (k + x), c),
                // k′ = k″ = ta/2 = 2κ_aux
                around(entropy, 2.0 * x, c),
                around(Measure::Delta, delta, c),
            ];
            (spec, ranges)
        }
        WitnessKind::KprimeCurve => {
            if x < k.sqrt() {
                return Err(out_of_range(format!("kappa_aux = {kappa_aux} must be at least sqrt(kappa)")));
            }
            if x > k * lk / r {
                return Err(out_of_range(format!(
                    "kappa_aux = {kappa_aux} must not exceed kappa·log2(kappa)/rho = {:.3}",
                    k * lk / r
                )));
            }
            let t = round_pow2(2.0 * r / lk).max(2);
            let tprime = round_pow2(4.0 * x * x / k);
            let ell_raw = 2.0 * (k * lk / (x * r)).powi(2);
            let ell_log = ((ell_raw.log2() / 2.0).round() * 2.0).max(2.0) as u32;
            let ell = 1usize << ell_log;
            let spec = FamilySpec::Aab { t, tprime, ell };
            let ranges = vec![
                ExpectedRange { measure: Measure::R, lo: eps * r / c, hi: c * r },
                // k ≈ t²ℓt′/2 = 16κ
                around(Measure::K, 16.0 * k, c),
                // k′ = tt′√ℓ/2 = 4√2·κ_aux
                around(Measure::Kprime, 4.0 * std::f64::consts::SQRT_2 * x, c),
                ExpectedRange { measure: Measure::Delta, lo: 0.0, hi: c * k / (x * x) },
            ];
            (spec, ranges)
        }
        WitnessKind::KdprimeCurve => {
            if x < std::f64::consts::E * r {
                return Err(out_of_range(format!("kappa_aux = {kappa_aux} must be at least e·rho")));
            }
            if x > k * lk / r {
                return Err(out_of_range(format!(
                    "kappa_aux = {kappa_aux} must not exceed kappa·log2(kappa)/rho = {:.3}",
                    k * lk / r
                )));
            }
            let ratio = x / r;
            let t = round_pow2(2.0 * r / ratio.log2()).max(2);
            let tprime = round_pow2(ratio * ratio.log2());
            let p = (4.0 * k / x).log2().round() as usize;
            let m = tprime.trailing_zeros() as usize;
            if p < 2 || p > (t - 1) * m {
                return Err(out_of_range(format!("p = {p} outside [2, (t-1)·log2(tprime)] = [2, {}]", (t - 1) * m)));
            }
            let spec = FamilySpec::Mad { t, tprime, p };
            let ranges = vec![
                around(Measure::R, r, c),
                ExpectedRange { measure: Measure::K, lo: k / c, hi: c * k / eps },
                // k″ = Θ(tt′) = Θ(2κ″)
                around(Measure::Kdprime, 2.0 * x, c),
                around(Measure::Delta, r / (x * ratio.log2()), c),
            ];
            (spec, ranges)
        }
    };
    spec.validate()?;
    Ok(Witness { kind, spec, ranges })
}

impl Witness {
    /// Measured profile of the instantiated function.
    pub fn measure(&self) -> Result<SpectralProfile> {
        self.spec.measure()
    }

    pub fn check(&self, p: &SpectralProfile) -> Vec<RangeCheck> {
        self.ranges
            .iter()
            .map(|rg| {
                let value = match rg.measure {
                    Measure::R => p.r as f64,
                    Measure::K => p.k as f64,
                    Measure::Kprime => to_f64(&p.kprime),
                    Measure::Kdprime => to_f64(&p.kdprime),
                    Measure::Delta => to_f64(&p.delta),
                };
                RangeCheck { measure: rg.measure, value, lo: rg.lo, hi: rg.hi, ok: rg.lo <= value && value <= rg.hi }
            })
            .collect()
    }
}

/// `Σ_b ∏_{i∈S} b_i` over all `b ∈ {−1,1}^n`.
pub fn sign_sum(n: usize, s: Mask) -> i64 {
    (0..1u128 << n).map(|b| if (b & s).count_ones() % 2 == 0 { 1 } else { -1 }).sum()
}
