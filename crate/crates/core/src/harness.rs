//! Verification suites, the exhaustive frontier scan and plot-data emission.
//!
//! Every suite is deterministic for a given seed. Failures are collected in
//! generation order, so [`SuiteResult::failures_json`] is byte-stable across
//! runs regardless of thread count.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, best_chang_bound, chang_weight_bound, dim_screen, Status, Verdict};
use crate::constructions::{compose_addressing, witness, FamilySpec, Witness, WitnessKind};
use crate::function::{BooleanFunction, SparseSpectrum, Spectrum};
use crate::gf2::{full_mask, Gf2Basis, Gf2Matrix, Mask};
use crate::measures::{self, profile, SpectralProfile};
use crate::napdt::{self, Mode};
use crate::rational::{to_f64, Rational};
use crate::{Error, Result};

/// Largest arity for the exhaustive scan (`2^16` functions).
pub const MAX_SCAN_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Tables,
    Composition,
    Napdt,
    Chlt,
    Chang,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Core, Suite::Tables, Suite::Composition, Suite::Napdt, Suite::Chlt, Suite::Chang];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Tables => "tables",
            Suite::Composition => "composition",
            Suite::Napdt => "napdt",
            Suite::Chlt => "chlt",
            Suite::Chang => "chang",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Exhaustive up to `min(max_n, 4)`, sampled above.
    pub max_n: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { max_n: 4, samples: 200, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub function: String,
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Seconds.
    pub wall_time: f64,
    pub pass: bool,
    /// Recorded observations that are not assertions.
    pub notes: Vec<String>,
}

impl SuiteResult {
    /// The result without wall time; identical across reruns with one seed.
    pub fn failures_json(&self) -> String {
        serde_json::json!({
            "suite": self.suite,
            "cases": self.cases,
            "pass": self.pass,
            "failures": self.failures,
        })
        .to_string()
    }

    pub fn summary(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        format!("{status} {} cases={} failures={} time={:.2}s", self.suite, self.cases, self.failures.len(), self.wall_time)
    }
}

/// Collects cases and failures for one suite.
struct Recorder {
    suite: &'static str,
    cases: usize,
    failures: Vec<Failure>,
    notes: Vec<String>,
    start: Instant,
}

impl Recorder {
    fn new(suite: &'static str) -> Self {
        Self { suite, cases: 0, failures: vec![], notes: vec![], start: Instant::now() }
    }

    fn fail(&mut self, function: &str, inequality: &str, lhs: f64, rhs: f64) {
        self.failures.push(Failure { function: function.into(), inequality: inequality.into(), lhs, rhs });
    }

    fn check(&mut self, ok: bool, function: &str, inequality: &str, lhs: f64, rhs: f64) {
        if !ok {
            self.fail(function, inequality, lhs, rhs);
        }
    }

    fn check_eq<T: PartialEq + Copy + Into<Num>>(&mut self, function: &str, what: &str, got: T, want: T) {
        self.check(got == want, function, what, got.into().0, want.into().0);
    }

    fn verdicts(&mut self, function: &str, vs: &[Verdict]) {
        for v in vs.iter().filter(|v| v.failed()) {
            self.fail(function, &v.name, v.lhs, v.rhs);
        }
    }

    fn error(&mut self, function: &str, e: &Error) {
        self.notes.push(format!("{function}: {e}"));
        self.fail(function, "error", f64::NAN, f64::NAN);
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            suite: self.suite.into(),
            cases: self.cases,
            pass: self.failures.is_empty(),
            failures: self.failures,
            wall_time: self.start.elapsed().as_secs_f64(),
            notes: self.notes,
        }
    }
}

/// Numeric view for failure records.
struct Num(f64);

impl From<usize> for Num {
    fn from(v: usize) -> Self {
        Num(v as f64)
    }
}

impl From<Rational> for Num {
    fn from(v: Rational) -> Self {
        Num(to_f64(&v))
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A uniformly random function of arity `n`.
pub fn random_function<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BooleanFunction> {
    if n <= 6 {
        return Ok(BooleanFunction::from_word(n, rng.gen()));
    }
    let bits: Vec<bool> = (0..1usize << n).map(|_| rng.gen()).collect();
    BooleanFunction::from_fn(n, |i| bits[i])
}

fn table_id(f: &BooleanFunction) -> String {
    if f.n() <= 4 {
        format!("n={}:{:#06x}", f.n(), f.words()[0])
    } else {
        format!("n={}:{}", f.n(), f.table_string())
    }
}

fn spec_id(spec: &FamilySpec) -> String {
    serde_json::to_string(spec).expect("spec serializes")
}

/// Runs one suite; `All` runs every suite in order.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<SuiteResult> {
    match suite {
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(s, opts)).collect(),
        Suite::Core => vec![suite_core(opts)],
        Suite::Tables => vec![suite_tables()],
        Suite::Composition => vec![suite_composition(opts)],
        Suite::Napdt => vec![suite_napdt(opts)],
        Suite::Chlt => vec![suite_chlt(opts)],
        Suite::Chang => vec![suite_beating_chang()],
    }
}

fn all_functions(n: usize) -> impl IndexedParallelIterator<Item = BooleanFunction> {
    let count = 1usize << (1usize << n);
    (0..count).into_par_iter().map(move |w| BooleanFunction::from_word(n, w as u64))
}

/// Every inequality verdict on every function of arity `≤ min(max_n, 4)`,
/// plus `samples` random functions for each larger arity.
pub fn suite_core(opts: &SuiteOptions) -> SuiteResult {
    let mut rec = Recorder::new("core");
    for n in 1..=opts.max_n.min(MAX_SCAN_N) {
        let failed: Vec<(String, Vec<Verdict>)> = all_functions(n)
            .map(|f| {
                let v = bounds::verify_inequalities(&f);
                (table_id(&f), v.into_iter().filter(Verdict::failed).collect::<Vec<_>>())
            })
            .filter(|(_, v)| !v.is_empty())
            .collect();
        rec.cases += 1 << (1 << n);
        for (id, v) in failed {
            rec.verdicts(&id, &v);
        }
    }
    for n in MAX_SCAN_N + 1..=opts.max_n {
        let mut r = rng(opts.seed, n as u64);
        for _ in 0..opts.samples {
            match random_function(n, &mut r) {
                Ok(f) => {
                    rec.cases += 1;
                    let v = bounds::verify_inequalities(&f);
                    rec.verdicts(&table_id(&f), &v);
                }
                Err(e) => {
                    rec.error(&format!("n={n}"), &e);
                    break;
                }
            }
        }
    }
    rec.finish()
}

/// A table row as stated: `(δ, k, r, k′, k″)`.
pub struct TableRow {
    pub spec: FamilySpec,
    pub delta: Rational,
    pub k: usize,
    pub r: usize,
    pub kprime: Rational,
    pub kdprime: Rational,
}

fn row(spec: FamilySpec, delta: (i64, i64), k: usize, r: usize, kp: i64, kdp: i64) -> TableRow {
    TableRow {
        spec,
        delta: Rational::new(delta.0, delta.1),
        k,
        r,
        kprime: Rational::from_integer(kp),
        kdprime: Rational::from_integer(kdp),
    }
}

/// The construction table at the fixed grid, with sparsities as measured.
///
/// The formula `1 + t′/2 + ℓt′/2` would give 21 for `AB(8,4)`, and 81 for
/// `AAB(2,8,4)` after composing; the functions as defined have 20 and 77,
/// which is what the composition rule `1 + t²(k(g) − 1)` yields from 20.
pub fn construction_table() -> Vec<TableRow> {
    vec![
        row(FamilySpec::And { n: 3 }, (1, 8), 8, 3, 4, 4),
        row(FamilySpec::Addressing { t: 4 }, (1, 2), 16, 6, 4, 4),
        row(FamilySpec::AdTt { t: 4, tprime: 8 }, (1, 8), 113, 14, 16, 16),
        row(FamilySpec::AdTta { t: 4, tprime: 4, a: 8 }, (7, 32), 68, 11, 16, 16),
        row(FamilySpec::Ab { tprime: 8, ell: 4 }, (1, 8), 20, 5, 8, 8),
        row(FamilySpec::Aab { t: 2, tprime: 8, ell: 4 }, (1, 8), 77, 11, 16, 16),
    ]
}

/// `mAD(4,4,2)` with its exact `δ`, `r` and the centers for `k` and `k″`.
pub const MAD_TABLE: (usize, usize, usize) = (4, 4, 2);

/// Parameter formulas for `AD_{t,t′}`: `(δ, k, r, k′, k″)`.
pub fn ad_tt_formula(t: usize, tprime: usize) -> (Rational, usize, usize, Rational, Rational) {
    let lt = t.trailing_zeros() as usize;
    let ltp = tprime.trailing_zeros() as usize;
    let half = Rational::from_integer((t * tprime / 2) as i64);
    (Rational::new(1, tprime as i64), 1 + t * t * (tprime - 1), t * ltp + lt, half, half)
}

/// Parameter formulas for `AD_{t,t′,a}`: `(δ, k, r, k′, k″)`.
pub fn ad_tta_formula(t: usize, tprime: usize, a: usize) -> (Rational, usize, usize, Rational, Rational) {
    let (ti, tpi, ai) = (t as i64, tprime as i64, a as i64);
    let lt = t.trailing_zeros() as usize;
    let ltp = tprime.trailing_zeros() as usize;
    let la = a.trailing_zeros() as usize;
    let delta = Rational::new(1, tpi) + Rational::new(1, ai * ti) - Rational::new(1, ti * tpi);
    let half = Rational::from_integer(ti * ai / 2);
    (delta, (t - 1) * (tprime - 1) * t + t * a, (t - 1) * ltp + la + lt, half, half)
}

fn check_row(rec: &mut Recorder, id: &str, p: &SpectralProfile, want: (Rational, usize, usize, Rational, Rational)) {
    rec.check_eq(id, "delta", p.delta, want.0);
    rec.check_eq(id, "k", p.k, want.1);
    rec.check_eq(id, "r", p.r, want.2);
    rec.check_eq(id, "kprime", p.kprime, want.3);
    rec.check_eq(id, "kdprime", p.kdprime, want.4);
}

/// Table rows and family formulas checked against brute-force transforms,
/// and closed-form spectra checked against those transforms.
pub fn suite_tables() -> SuiteResult {
    let mut rec = Recorder::new("tables");
    let dense = |rec: &mut Recorder, spec: &FamilySpec| -> Option<(SpectralProfile, Spectrum)> {
        rec.cases += 1;
        let id = spec_id(spec);
        let f = match spec.make() {
            Ok(f) => f,
            Err(e) => {
                rec.error(&id, &e);
                return None;
            }
        };
        let s = f.wht();
        if let Ok(cf) = spec.closed_form_spectrum() {
            rec.check(cf == s, &id, "closed_form_matches_transform", 0.0, 0.0);
        }
        Some((profile(&f), s))
    };

    for tr in construction_table() {
        if let Some((p, _)) = dense(&mut rec, &tr.spec) {
            check_row(&mut rec, &spec_id(&tr.spec), &p, (tr.delta, tr.k, tr.r, tr.kprime, tr.kdprime));
        }
    }

    let (t, tprime, pp) = MAD_TABLE;
    let mad = FamilySpec::Mad { t, tprime, p: pp };
    if let Some((p, _)) = dense(&mut rec, &mad) {
        let id = spec_id(&mad);
        rec.check_eq(&id, "delta", p.delta, Rational::new(1, 4));
        rec.check_eq(&id, "r", p.r, 10);
        let k_center = ((1 << pp) * t * tprime + t * t * tprime) as f64;
        let kdp_center = (t * tprime) as f64;
        let c = crate::constructions::SANDWICH;
        let k = p.k as f64;
        rec.check(k >= k_center / c && k <= k_center * c, &id, "k_within_sandwich", k, k_center);
        let kdp = to_f64(&p.kdprime);
        rec.check(kdp >= kdp_center / c && kdp <= kdp_center * c, &id, "kdprime_within_sandwich", kdp, kdp_center);
    }

    for &(kind, rho, kappa, aux) in &WITNESS_GRID {
        rec.cases += 1;
        let id = format!("{kind:?}({rho},{kappa},{aux})");
        match witness(kind, rho, kappa, aux).and_then(|w| w.measure().map(|p| w.check(&p))) {
            Ok(checks) => {
                for c in checks.iter().filter(|c| !c.ok) {
                    rec.fail(&id, &format!("{:?}_in_range", c.measure).to_lowercase(), c.value, c.hi);
                }
            }
            Err(e) => rec.error(&id, &e),
        }
    }

    for &(t, tprime) in &[(2, 8), (2, 16), (2, 32), (4, 8), (4, 16)] {
        let spec = FamilySpec::AdTt { t, tprime };
        if let Some((p, _)) = dense(&mut rec, &spec) {
            check_row(&mut rec, &spec_id(&spec), &p, ad_tt_formula(t, tprime));
        }
    }
    for &(t, tprime, a) in &[(2, 4, 8), (2, 8, 16), (4, 4, 8), (4, 8, 16), (4, 4, 32)] {
        let spec = FamilySpec::AdTta { t, tprime, a };
        if let Some((p, _)) = dense(&mut rec, &spec) {
            check_row(&mut rec, &spec_id(&spec), &p, ad_tta_formula(t, tprime, a));
        }
    }
    rec.finish()
}

/// Fixed `(kind, ρ, κ, κ_aux)` grid; every entry satisfies its family's
/// preconditions after power-of-two rounding.
pub const WITNESS_GRID: [(WitnessKind, u64, u64, u64); 18] = [
    (WitnessKind::Kline, 8, 256, 192),
    (WitnessKind::Kline, 12, 1024, 512),
    (WitnessKind::Kline, 16, 4096, 2048),
    (WitnessKind::Kline, 24, 4096, 2048),
    (WitnessKind::KdprimeLine, 8, 256, 256),
    (WitnessKind::KdprimeLine, 12, 1024, 1024),
    (WitnessKind::KdprimeLine, 20, 4096, 4096),
    (WitnessKind::KdprimeLine, 40, 65536, 32768),
    (WitnessKind::KprimeCurve, 8, 256, 24),
    (WitnessKind::KprimeCurve, 8, 256, 96),
    (WitnessKind::KprimeCurve, 12, 1024, 128),
    (WitnessKind::KprimeCurve, 16, 4096, 512),
    (WitnessKind::KprimeCurve, 20, 4096, 1024),
    (WitnessKind::KdprimeCurve, 8, 256, 24),
    (WitnessKind::KdprimeCurve, 8, 256, 64),
    (WitnessKind::KdprimeCurve, 10, 1024, 128),
    (WitnessKind::KdprimeCurve, 16, 4096, 1024),
    (WitnessKind::KdprimeCurve, 20, 4096, 256),
];

/// Instantiates every grid entry.
pub fn witness_grid() -> Result<Vec<Witness>> {
    WITNESS_GRID.iter().map(|&(kind, rho, kappa, aux)| witness(kind, rho, kappa, aux)).collect()
}

/// Some nonempty `S` has `0 < |ĝ(S)| ≤ |ĝ(∅)|`, and `g` is not constant.
pub fn composition_condition(s: &SparseSpectrum) -> bool {
    let empty = s.get(0).abs();
    measures::nonempty_sparsity(s) > 0 && s.terms().iter().any(|&(m, v)| m != 0 && v.abs() <= empty)
}

/// The five quantities of `AD_t ∘ g` predicted from `g`.
pub fn composition_prediction(t: usize, g: &SpectralProfile) -> (Rational, usize, usize, Rational, Rational) {
    let ti = Rational::from_integer(t as i64);
    (g.delta, 1 + t * t * (g.k - 1), t * g.r + t.trailing_zeros() as usize, ti * g.kprime, ti * g.kdprime)
}

/// Draws random inner functions with `m ≤ 4` satisfying the composition
/// condition, for `t` alternating between 2 and 4.
pub fn composition_instances(count: usize, seed: u64) -> Vec<(usize, BooleanFunction)> {
    let mut r = rng(seed, 0xC0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = r.gen_range(2..=4);
        let g = BooleanFunction::from_word(m, r.gen());
        if composition_condition(&g.wht().to_sparse()) {
            let t = if out.len() % 2 == 0 { 2 } else { 4 };
            out.push((t, g));
        }
    }
    out
}

pub fn suite_composition(opts: &SuiteOptions) -> SuiteResult {
    let mut rec = Recorder::new("composition");
    let instances = composition_instances(opts.samples, opts.seed);
    let results: Vec<_> = instances
        .par_iter()
        .map(|(t, g)| {
            let id = format!("t={t};g={}", table_id(g));
            let got = compose_addressing(*t, g).map(|f| profile(&f));
            (id, composition_prediction(*t, &profile(g)), got)
        })
        .collect();
    for (id, want, got) in results {
        rec.cases += 1;
        match got {
            Ok(p) => check_row(&mut rec, &id, &p, want),
            Err(e) => rec.error(&id, &e),
        }
    }
    rec.finish()
}

/// Random `(f, Γ)` pairs with `n ≤ 4`, independent `Γ` and at least two
/// classes of `supp(f)` modulo `span(Γ)`.
pub fn restriction_pairs(count: usize, seed: u64) -> Vec<(BooleanFunction, Vec<Mask>)> {
    let mut r = rng(seed, 0xE8);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = r.gen_range(1..=4);
        let f = BooleanFunction::from_word(n, r.gen());
        let size = r.gen_range(1..=n);
        let mut basis = Gf2Basis::new();
        let mut gamma = Vec::with_capacity(size);
        while gamma.len() < size {
            let m = r.gen_range(1..=full_mask(n));
            if basis.insert(m) {
                gamma.push(m);
            }
        }
        if napdt::expected_sparsity_floor(&f, &gamma).0 >= 2 {
            out.push((f, gamma));
        }
    }
    out
}

/// Audits of the restriction algorithm: exact mode on every function with
/// `n ≤ min(max_n, 3)`, greedy mode on the same, the named examples, sampled
/// larger arities, and the restriction expectation identities.
pub fn suite_napdt(opts: &SuiteOptions) -> SuiteResult {
    let mut rec = Recorder::new("napdt");
    let run = |f: &BooleanFunction, mode: Mode| -> Result<(usize, Vec<Verdict>)> {
        let (gamma, trace) = napdt::napdt(f, mode)?;
        Ok((gamma.len(), napdt::audit(f, &gamma, &trace)?))
    };
    let absorb = |rec: &mut Recorder, id: String, res: Result<(usize, Vec<Verdict>)>| -> Option<usize> {
        rec.cases += 1;
        match res {
            Ok((size, v)) => {
                rec.verdicts(&id, &v);
                Some(size)
            }
            Err(e) => {
                rec.error(&id, &e);
                None
            }
        }
    };

    for mode in [Mode::Exact, Mode::Greedy] {
        for n in 1..=opts.max_n.min(3) {
            let results: Vec<_> = all_functions(n).map(|f| (format!("{mode:?}:{}", table_id(&f)), run(&f, mode))).collect();
            for (id, res) in results {
                absorb(&mut rec, id, res);
            }
        }
    }

    let named = [
        (BooleanFunction::constant(3, crate::Sign::Plus), 0),
        (BooleanFunction::parity(3, 0b111), 1),
        (BooleanFunction::and(3), 3),
    ];
    for (f, want) in named {
        let f = f.expect("arity 3 is within the guard");
        let id = format!("named:{}", table_id(&f));
        if let Some(size) = absorb(&mut rec, id.clone(), run(&f, Mode::Exact)) {
            rec.check_eq(&id, "parity_count", size, want);
        }
    }

    for n in 4..=opts.max_n {
        let mut r = rng(opts.seed, 0x40 + n as u64);
        let modes: &[Mode] = if n <= crate::DEFAULT_EXACT_SEARCH_MAX_N.min(5) { &[Mode::Exact, Mode::Greedy] } else { &[Mode::Greedy] };
        for _ in 0..opts.samples.min(64) {
            let f = match random_function(n, &mut r) {
                Ok(f) => f,
                Err(e) => {
                    rec.error(&format!("n={n}"), &e);
                    break;
                }
            };
            for &mode in modes {
                absorb(&mut rec, format!("{mode:?}:{}", table_id(&f)), run(&f, mode));
            }
        }
    }

    for (f, gamma) in restriction_pairs(100, opts.seed) {
        rec.cases += 1;
        let id = format!("{};gamma={gamma:?}", table_id(&f));
        match napdt::restriction_averages(&f, &gamma) {
            Ok((avg_delta, avg_kplus)) => {
                rec.check_eq(&id, "mean_restricted_weight", avg_delta, f.delta());
                let (_, floor) = napdt::expected_sparsity_floor(&f, &gamma);
                rec.check(avg_kplus >= floor, &id, "mean_restricted_sparsity", to_f64(&avg_kplus), to_f64(&floor));
            }
            Err(e) => rec.error(&id, &e),
        }
    }
    rec.finish()
}

/// Spectrum of `g^{⊕t}` predicted from the spectrum of `g`: the coefficient
/// at `(S_1, …, S_t)` is `∏ ĝ(S_i)`.
pub fn xor_power_spectrum(g: &Spectrum, t: usize) -> Vec<Rational> {
    let m = g.n();
    (0..1usize << (m * t))
        .map(|idx| (0..t).map(|i| g.fhat((idx >> (i * m)) & ((1 << m) - 1))).product())
        .collect()
}

/// Level-one bounds and their amplification: the tensor law for XOR powers,
/// degree preservation, level-one checks on powers with small weight, and
/// invariance of the checks under invertible changes of basis.
pub fn suite_chlt(opts: &SuiteOptions) -> SuiteResult {
    let mut rec = Recorder::new("chlt");
    let mut r = rng(opts.seed, 0xC4);
    let level_one = |rec: &mut Recorder, id: &str, f: &BooleanFunction| {
        let v = bounds::verify_inequalities(f);
        let picked: Vec<Verdict> = v.into_iter().filter(|x| x.name.starts_with("level_one") || x.name.starts_with("basis_l1")).collect();
        rec.verdicts(id, &picked);
    };

    for m in 1..=3 {
        for word in 0..1u64 << (1 << m) {
            let g = BooleanFunction::from_word(m, word);
            let gs = g.wht();
            for t in 2..=3usize {
                if m * t > 9 {
                    continue;
                }
                rec.cases += 1;
                let id = format!("{}^xor{t}", table_id(&g));
                let f = match g.xor_power(t) {
                    Ok(f) => f,
                    Err(e) => {
                        rec.error(&id, &e);
                        continue;
                    }
                };
                let fs = f.wht();
                let predicted = xor_power_spectrum(&gs, t);
                let same = (0..fs.coeffs().len()).all(|i| fs.fhat(i) == predicted[i]);
                rec.check(same, &id, "tensor_law", 0.0, 0.0);
                let bias = Rational::one() - f.delta() * 2;
                let gbias = Rational::one() - g.delta() * 2;
                let powered: Rational = (0..t).map(|_| gbias).product();
                rec.check_eq(&id, "bias_is_power", bias, powered);
                let (dg, df) = (g.f2_degree() as usize, f.f2_degree() as usize);
                rec.check_eq(&id, "degree_preserved", df, dg);
                level_one(&mut rec, &id, &f);
            }
        }
    }

    let n = 4;
    for i in 0..opts.samples {
        rec.cases += 1;
        let f = BooleanFunction::from_word(n, r.gen());
        let b = Gf2Matrix::random_invertible(n, &mut r);
        let id = format!("{};basis#{i}", table_id(&f));
        let s = f.wht();
        let moved = s.basis_change(&b).and_then(|t| t.inverse_wht().map(|g| (t, g)));
        match moved {
            Ok((t, g)) => {
                rec.check_eq(&id, "sparsity_invariant", t.sparsity(), s.sparsity());
                rec.check_eq(&id, "degree_invariant", g.f2_degree() as usize, f.f2_degree() as usize);
                rec.check_eq(&id, "weight_invariant", g.delta(), f.delta());
                level_one(&mut rec, &id, &g);
            }
            Err(e) => rec.error(&id, &e),
        }
    }
    rec.finish()
}

/// `AD_{t,t}` for `t ∈ {4, 8, 16}`: exact weight `1/t`, every nonempty
/// coefficient of magnitude `2/t²`, and `δ / best Chang bound ≥ 0.4√t`.
pub fn suite_beating_chang() -> SuiteResult {
    let mut rec = Recorder::new("chang");
    for t in [4usize, 8, 16] {
        rec.cases += 1;
        let spec = FamilySpec::AdTt { t, tprime: t };
        let id = spec_id(&spec);
        let s = match spec.closed_form_sparse() {
            Ok(s) => s,
            Err(e) => {
                rec.error(&id, &e);
                continue;
            }
        };
        let p = measures::profile_sparse(&s);
        rec.check_eq(&id, "delta", p.delta, Rational::new(1, t as i64));
        let level = Rational::new(2, (t * t) as i64);
        let off: Vec<Rational> = s.terms().iter().filter(|(m, _)| *m != 0).map(|(_, v)| v.abs()).filter(|v| *v != level).collect();
        rec.check(off.is_empty(), &id, "nonempty_coefficients_equal", off.first().map_or(0.0, to_f64), to_f64(&level));
        match best_chang_bound(&s) {
            Ok((best, _)) => {
                let ratio = to_f64(&p.delta) / best;
                let floor = 0.4 * (t as f64).sqrt();
                rec.notes.push(format!("t={t}: ratio {ratio:.4} against {floor:.4}"));
                rec.check(ratio > floor - 1e-9, &id, "weight_over_chang_ge_0.4_sqrt_t", ratio, floor);
            }
            Err(e) => rec.error(&id, &e),
        }
    }
    rec.finish()
}

/// Largest Chang bound over a dense grid of thresholds `t = 1 + i/steps`
/// up to twice the largest step.
pub fn chang_grid_max(s: &SparseSpectrum, steps: i64) -> Option<f64> {
    let dims = measures::threshold_dims(s);
    let top = dims.last()?.0 * 2;
    let mut best: Option<f64> = None;
    let mut i = 0;
    loop {
        let t = Rational::one() + Rational::new(i, steps);
        if t > top {
            break;
        }
        let d = dims.iter().take_while(|(th, _)| *th <= t).last().map_or(0, |x| x.1);
        if let Ok(v) = chang_weight_bound(d, t) {
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
        i += 1;
    }
    best
}

/// Fraction of threshold steps passing the constant-64 dimension screen.
pub fn dim_screen_tally(fs: impl Iterator<Item = BooleanFunction>) -> (usize, usize) {
    fs.flat_map(|f| dim_screen(&f.wht().to_sparse())).fold((0, 0), |(h, t), d| (h + d.holds as usize, t + 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub index: u64,
    pub w: u64,
    pub k: usize,
    pub r: usize,
    pub kprime: Rational,
    pub kdprime: Rational,
    pub degf2: u32,
    pub kline: Option<f64>,
    pub kprime_curve: Option<f64>,
    pub kdprime_curve: Option<f64>,
    pub chang_best: Option<f64>,
}

pub const SCAN_HEADER: &str =
    "index,w,k,r,kprime_num,kprime_den,kdprime_num,kdprime_den,degf2,kline,kprime_curve,kdprime_curve,chang_best";

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

impl ScanRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.index,
            self.w,
            self.k,
            self.r,
            self.kprime.numer(),
            self.kprime.denom(),
            self.kdprime.numer(),
            self.kdprime.denom(),
            self.degf2,
            opt(self.kline),
            opt(self.kprime_curve),
            opt(self.kdprime_curve),
            opt(self.chang_best)
        )
    }
}

pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    pub result: SuiteResult,
}

impl ScanOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 64);
        out.push_str(SCAN_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv());
            out.push('\n');
        }
        out
    }
}

/// Every function of arity `n ≤ 4`: one row each, sorted by table index,
/// with Parseval, granularity and every other verdict checked per row.
pub fn scan(n: usize) -> Result<ScanOutput> {
    if n > MAX_SCAN_N {
        return Err(Error::SizeGuard { what: "frontier scan", n, max: MAX_SCAN_N });
    }
    let mut rec = Recorder::new("scan");
    let mut rows: Vec<(ScanRow, Vec<Verdict>)> = all_functions(n)
        .enumerate()
        .map(|(index, f)| {
            let s = f.wht().to_sparse();
            let p = profile(&f);
            let rep = bounds::bound_report(&p, &s);
            let mut bad: Vec<Verdict> = rep.verdicts.into_iter().filter(Verdict::failed).collect();
            // degenerate rows skip the verdict list but still get these two
            if p.degenerate {
                let sq = s.sum_of_squares();
                if sq != Rational::one() {
                    bad.push(Verdict { name: "parseval".into(), lhs: to_f64(&sq), rhs: 1.0, status: Status::Fail });
                }
                let unit = Rational::from_integer(1);
                if s.terms().iter().any(|(_, v)| v.abs() != unit) {
                    bad.push(Verdict { name: "granularity".into(), lhs: 0.0, rhs: 1.0, status: Status::Fail });
                }
            }
            let row = ScanRow {
                index: index as u64,
                w: f.weight(),
                k: p.k,
                r: p.r,
                kprime: p.kprime,
                kdprime: p.kdprime,
                degf2: p.degf2.unwrap_or(0),
                kline: rep.kline,
                kprime_curve: rep.kprime_curve,
                kdprime_curve: rep.kdprime_curve,
                chang_best: rep.chang_best,
            };
            (row, bad)
        })
        .collect();
    rows.sort_by_key(|(r, _)| r.index);
    rec.cases = rows.len();
    for (row, bad) in &rows {
        rec.verdicts(&format!("n={n}:{:#x}", row.index), bad);
    }
    Ok(ScanOutput { rows: rows.into_iter().map(|(r, _)| r).collect(), result: rec.finish() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotKind {
    Kprime,
    Kdprime,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kprime" => Ok(PlotKind::Kprime),
            "kdprime" => Ok(PlotKind::Kdprime),
            other => Err(Error::Parse(format!("unknown plot kind {other:?}"))),
        }
    }
}

/// Points per plot.
pub const PLOT_POINTS: usize = 64;

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 || hi <= lo {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect()
}

fn cell(v: f64) -> String {
    if v.is_finite() && v > 0.0 {
        format!("{v}")
    } else {
        String::new()
    }
}

/// Weight lower-bound curves at fixed `(ρ, κ)` against the entropy measure.
///
/// `kprime`: `κ′ ∈ [√κ, κ]` with the k-line `ρ²/(κ log²κ)`, the curve
/// `κ/κ′²` and Chang's curve `√ρ/(κ′ log κ′)`.
/// `kdprime`: `κ″ ∈ [max(√ρ, ρ/log κ), κ]` with the k-line, the curve
/// `ρ/(κ″ log κ)` and Chang's curve `√ρ/(κ″ log(κ″²/ρ))`.
pub fn plotdata(kind: PlotKind, rho: f64, kappa: f64, points: usize) -> Result<String> {
    if !(kappa >= 4.0 && kappa.is_finite()) {
        return Err(Error::OutOfRange(format!("kappa = {kappa} must be at least 4")));
    }
    if !(rho >= 1.0 && rho.is_finite()) {
        return Err(Error::OutOfRange(format!("rho = {rho} must be at least 1")));
    }
    let lk = kappa.log2();
    let k_line = rho * rho / (kappa * lk * lk);
    let mut out = String::new();
    match kind {
        PlotKind::Kprime => {
            out.push_str("kappa_prime,k_line,kprime_curve,cl_kprime\n");
            for x in log_grid(kappa.sqrt(), kappa, points) {
                let cl = rho.sqrt() / (x * x.log2());
                let _ = writeln!(out, "{x},{},{},{}", cell(k_line), cell(kappa / (x * x)), cell(cl));
            }
        }
        PlotKind::Kdprime => {
            out.push_str("kappa_dprime,k_line,kdprime_curve,cl_kdprime\n");
            let lo = rho.sqrt().max(rho / lk);
            for x in log_grid(lo, kappa, points) {
                let cl = rho.sqrt() / (x * (x * x / rho).log2());
                let _ = writeln!(out, "{x},{},{},{}", cell(k_line), cell(rho / (x * lk)), cell(cl));
            }
        }
    }
    Ok(out)
}
