//! One line per acceptance criterion. Reference values come from the
//! test-side oracles in `common`; the library is only the thing under test.

mod common;

use std::time::Instant;

use boolspec::bounds::best_chang_bound;
use boolspec::constructions::{FamilySpec, Measure};
use boolspec::function::RestrictionMap;
use boolspec::harness::{self, SuiteOptions};
use boolspec::measures::profile;
use boolspec::napdt::{self, Mode};
use boolspec::{BooleanFunction, Rational, Sign};
use common::*;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Slack for the one float comparison (the Chang ratio).
const FLOAT_EPS: f64 = 1e-9;
/// Two-sided range factor for witness measures.
const SANDWICH: f64 = 8.0;
const COMPOSITION_INSTANCES: usize = 200;
const RESTRICTION_PAIRS: usize = 100;
const SEED: u64 = 20241016;

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: vec![], detail: String::new() }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn int(x: usize) -> Rational {
    Rational::from_integer(x as i64)
}

fn log2(x: usize) -> f64 {
    (x as f64).log2()
}

fn terms_of(n: usize, c: &[i64]) -> Vec<(u128, Rational)> {
    (0..c.len()).filter(|&s| c[s] != 0).map(|s| (s as u128, Rational::new(c[s], 1 << n))).collect()
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let mut checked = 0;
    for w in 0..1u64 << 16 {
        let f = BooleanFunction::from_word(4, w);
        let v = values(&f);
        let c = split_wht(&v);
        let m = measures(4, &c);
        let p = profile(&f);
        let deg = anf_degree(4, &v);
        out.require(
            (p.delta, p.k, p.r, p.kprime) == (m.delta, m.k, m.r, m.kprime) && (m.r == 0 || p.kdprime == m.kdprime),
            || format!("{w:#06x}: profile {:?} differs from definitions {m:?}", p.row()),
        );
        out.require(p.degf2 == Some(deg), || format!("{w:#06x}: degree"));
        let sq: i64 = c.iter().map(|x| x * x).sum();
        out.require(sq == 256, || format!("{w:#06x}: parseval {sq}/256"));
        if m.k <= 1 {
            continue;
        }
        checked += 1;
        let terms = terms_of(4, &c);
        let (k, r, delta, kp, kdp) = (int(m.k), int(m.r), m.delta, m.kprime, m.kdprime);
        let fl = usize::BITS - 1 - m.k.leading_zeros();
        let unit = q(2, 1 << fl);
        let lk = log2(m.k);
        let mut need = |ok: bool, name: &str| out.require(ok, || format!("{w:#06x}: {name}"));
        need(terms.iter().all(|t| (t.1.abs() / unit).is_integer()), "granularity");
        need(k * delta >= Rational::one(), "k·δ ≥ 1");
        need(m.k <= 1 << m.r, "log k ≤ r");
        need(k <= kp * kp && kp <= k / 2, "√k ≤ k′ ≤ k/2");
        need(r <= kdp * kdp && m.r as f64 <= 4.0 * lk * kdp.to_integer() as f64 + 1e-12 && kdp <= kp, "max(√r, r/(4 log k)) ≤ k″ ≤ k′");
        need(delta >= (k - Rational::one()) / (kp * kp * 4), "δ ≥ (k−1)/(4k′²)");
        let l1: Rational = terms.iter().map(|t| t.1.abs()).sum();
        need(l1 * l1 <= k * delta * 9, "ℓ1 ≤ 3√(kδ)");
        let basis = max_basis_l1(&terms);
        need(basis.to_integer() as f64 <= 4.0 * lk && (*basis.numer() as f64 / *basis.denom() as f64) <= 4.0 * lk + 1e-12, "basis ℓ1 ≤ 4 log k");
        let level1: Rational = terms.iter().filter(|t| t.0.count_ones() == 1).map(|t| t.1.abs()).sum();
        let d = int(deg as usize);
        need(level1 <= d * 4, "level-1 ≤ 4·deg");
        if delta <= q(1, 4) {
            need(level1 <= d * delta * 32, "level-1 ≤ 32·δ·deg");
            need(basis <= d * delta * 32, "basis ℓ1 ≤ 32·δ·deg");
        }
    }
    let suite = harness::suite_core(&SuiteOptions { max_n: 4, samples: 0, seed: SEED });
    out.require(suite.pass, || format!("library core suite: {} failures", suite.failures.len()));
    out.detail = format!("65536 functions, {checked} non-degenerate");
    out
}

fn dictator(y: usize) -> bool {
    y & 1 == 1
}

fn and2(y: usize) -> bool {
    and_minus(y, 2)
}

fn and3(y: usize) -> bool {
    and_minus(y, 3)
}

fn ab_8_4(y: usize) -> bool {
    twisted_and_minus(y, 3, |z| ip_minus(z, 1))
}

fn mad_4_4_2(x: usize) -> bool {
    let a = x & 3;
    let y = (x >> (2 + 2 * a)) & 3;
    if a == 0 {
        let u = (x >> 4) & 3;
        twisted_and_minus(y | (u << 2), 2, |z| and_minus(z, 2))
    } else {
        and2(y)
    }
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    // (spec, arity, oracle table, (δ, k, r, k′, k″) as measured, stated k)
    type Row = (FamilySpec, usize, Vec<i64>, (Rational, usize, usize, i64, i64), usize);
    let rows: Vec<Row> = vec![
        (FamilySpec::And { n: 3 }, 3, table(3, and3), (q(1, 8), 8, 3, 4, 4), 8),
        (FamilySpec::Addressing { t: 4 }, 6, table(6, |x| addressing_minus(x, 4, &[1; 4], &[&dictator as &dyn Fn(usize) -> bool; 4])), (q(1, 2), 16, 6, 4, 4), 16),
        (FamilySpec::AdTt { t: 4, tprime: 8 }, 14, table(14, |x| addressing_minus(x, 4, &[3; 4], &[&and3 as &dyn Fn(usize) -> bool; 4])), (q(1, 8), 113, 14, 16, 16), 113),
        (
            FamilySpec::AdTta { t: 4, tprime: 4, a: 8 },
            11,
            table(11, |x| addressing_minus(x, 4, &[3, 2, 2, 2], &[&and3, &and2 as &dyn Fn(usize) -> bool, &and2, &and2])),
            (q(7, 32), 68, 11, 16, 16),
            68,
        ),
        (FamilySpec::Ab { tprime: 8, ell: 4 }, 5, table(5, ab_8_4), (q(1, 8), 20, 5, 8, 8), 21),
        (FamilySpec::Aab { t: 2, tprime: 8, ell: 4 }, 11, table(11, |x| addressing_minus(x, 2, &[5, 5], &[&ab_8_4 as &dyn Fn(usize) -> bool, &ab_8_4])), (q(1, 8), 77, 11, 16, 16), 81),
    ];
    let mut notes = vec![];
    for (spec, n, oracle, want, stated) in rows {
        let m = measures(n, &split_wht(&oracle));
        let got = (m.delta, m.k, m.r, m.kprime, m.kdprime);
        let want_r = (want.0, want.1, want.2, int(want.3 as usize), int(want.4 as usize));
        out.require(got == want_r, || format!("{spec:?}: oracle {got:?} vs {want_r:?}"));
        let f = spec.make().unwrap();
        out.require(values(&f) == oracle, || format!("{spec:?}: library table differs from the definition"));
        out.require(profile(&f).row() == got, || format!("{spec:?}: library profile {:?}", profile(&f).row()));
        if stated != want.1 {
            notes.push(format!("{} k={} (stated {stated})", spec.name(), want.1));
        }
    }
    let oracle = table(10, mad_4_4_2);
    let m = measures(10, &split_wht(&oracle));
    out.require(m.delta == q(1, 4) && m.r == 10, || format!("mAD(4,4,2): δ={} r={}", m.delta, m.r));
    let (kc, kdc) = (320.0, 16.0);
    let (k, kdp) = (m.k as f64, m.kdprime.to_integer() as f64);
    out.require(k >= kc / SANDWICH && k <= kc * SANDWICH, || format!("mAD(4,4,2): k={k} vs {kc}"));
    out.require(kdp >= kdc / SANDWICH && kdp <= kdc * SANDWICH, || format!("mAD(4,4,2): k″={kdp} vs {kdc}"));
    let f = FamilySpec::Mad { t: 4, tprime: 4, p: 2 }.make().unwrap();
    out.require(values(&f) == oracle, || "mAD(4,4,2): library table differs".into());
    notes.push(format!("mad k={} k''={}", m.k, m.kdprime));
    let suite = harness::suite_tables();
    out.require(suite.pass, || format!("library tables suite: {:?}", suite.failures));
    out.detail = notes.join(", ");
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let grid = spec_grid(14);
    for spec in &grid {
        let f = spec.make().unwrap();
        let direct = split_wht(&values(&f));
        match spec.closed_form_spectrum() {
            Ok(s) => out.require(s.coeffs() == &direct[..], || format!("{spec:?}")),
            Err(e) => out.failures.push(format!("{spec:?}: {e}")),
        }
    }
    out.detail = format!("{} specs with arity ≤ 14", grid.len());
    out
}

fn composition_condition(terms: &[(u128, Rational)]) -> bool {
    let empty = terms.iter().find(|t| t.0 == 0).map_or(Rational::zero(), |t| t.1.abs());
    terms.iter().any(|t| t.0 != 0) && terms.iter().any(|t| t.0 != 0 && t.1.abs() <= empty)
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut done = 0;
    while done < COMPOSITION_INSTANCES {
        let m = rng.gen_range(2..=4);
        let word: u64 = rng.gen();
        let gv = table(m, |y| (word >> y) & 1 == 1);
        let gc = split_wht(&gv);
        if !composition_condition(&terms_of(m, &gc)) {
            continue;
        }
        let t: usize = if done % 2 == 0 { 2 } else { 4 };
        let s = t.trailing_zeros() as usize;
        let g = measures(m, &gc);
        let gf = |y: usize| gv[y] == -1;
        let blocks: Vec<&dyn Fn(usize) -> bool> = vec![&gf; t];
        let n = s + t * m;
        let f = measures(n, &split_wht(&table(n, |x| addressing_minus(x, t, &vec![m; t], &blocks))));
        let tq = int(t);
        let want = Measures { delta: g.delta, k: 1 + t * t * (g.k - 1), r: t * g.r + s, kprime: tq * g.kprime, kdprime: tq * g.kdprime };
        out.require(f == want, || format!("t={t} m={m} word={word:#x}: {f:?} vs {want:?}"));
        done += 1;
    }
    let suite = harness::suite_composition(&SuiteOptions { max_n: 4, samples: COMPOSITION_INSTANCES, seed: SEED });
    out.require(suite.pass, || format!("library composition suite: {:?}", suite.failures));
    out.detail = format!("{COMPOSITION_INSTANCES} instances, t ∈ {{2, 4}}, m ≤ 4");
    out
}

/// Restriction of `f` to `{x : χ_γ(x) = b_γ}` as a list of `±1` values.
fn restricted_values(f: &[i64], gamma: &[u128], b: &[Sign]) -> Vec<i64> {
    (0..f.len())
        .filter(|&x| gamma.iter().zip(b).all(|(&g, s)| ((g & x as u128).count_ones() % 2 == 1) == (*s == Sign::Minus)))
        .map(|x| f[x])
        .collect()
}

fn all_assignments(len: usize) -> Vec<Vec<Sign>> {
    (0..1u64 << len).map(|c| (0..len).map(|j| Sign::from_bit((c >> j) & 1 == 1)).collect()).collect()
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let mut count = 0;
    for n in 1..=3usize {
        for w in 0..1u64 << (1 << n) {
            count += 1;
            let f = BooleanFunction::from_word(n, w);
            let v = values(&f);
            let c = split_wht(&v);
            let m = measures(n, &c);
            let support: Vec<u128> = terms_of(n, &c).iter().map(|t| t.0).collect();
            let kd = int(m.k) * m.delta;
            let (gamma, trace) = napdt::napdt(&f, Mode::Exact).unwrap();
            let id = format!("n={n} {w:#x}");
            for b in all_assignments(gamma.len()) {
                let rv = restricted_values(&v, &gamma, &b);
                out.require(rv.iter().all(|&x| x == rv[0]), || format!("{id}: non-constant restriction"));
            }
            out.require(m.r <= gamma.len(), || format!("{id}: r > |Γ|"));
            if m.k > 1 {
                let bound = 6.0 * (*kd.numer() as f64 / *kd.denom() as f64).sqrt() * log2(m.k);
                out.require(gamma.len() as f64 <= bound + 1e-12, || format!("{id}: |Γ| = {} > {bound}", gamma.len()));
            }
            let mut used = 0;
            let mut with_empty = support.clone();
            with_empty.push(0);
            let mut ell_prev = classes(&with_empty, &[]);
            for it in &trace.iterations {
                used += it.q_i;
                let prefix = &gamma[..used];
                let ell = classes(&with_empty, prefix);
                out.require(ell == it.ell_i && ell_prev == it.ell_prev && ell < ell_prev, || format!("{id}: coset counts"));
                // q_i/(ℓ_{i−1} − ℓ_i) ≤ 6√(δk)/ℓ_{i−1}
                let lhs = q(it.q_i as i64, (ell_prev - ell).max(1) as i64) * int(ell_prev);
                out.require(lhs * lhs <= kd * 36, || format!("{id}: q_i bound"));
                if ell >= 2 {
                    let bound = kd * 4 / int(ell * ell);
                    let best = all_assignments(prefix.len())
                        .iter()
                        .map(|b| restricted_values(&v, prefix, b))
                        .filter(|rv| rv.iter().any(|&x| x != rv[0]))
                        .map(|rv| {
                            let rn = rv.len().trailing_zeros() as usize;
                            let rm = measures(rn, &split_wht(&rv));
                            rm.delta / int(rm.k)
                        })
                        .min();
                    out.require(best.is_some_and(|b| b <= bound), || format!("{id}: restriction ratio {best:?} > {bound}"));
                }
                ell_prev = ell;
            }
            out.require(used == gamma.len(), || format!("{id}: Σq ≠ |Γ|"));
            for verdict in napdt::audit(&f, &gamma, &trace).unwrap() {
                out.require(!verdict.failed(), || format!("{id}: library audit {}", verdict.name));
            }
        }
    }
    let named = [
        (BooleanFunction::constant(3, Sign::Plus).unwrap(), 0),
        (BooleanFunction::parity(3, 0b111).unwrap(), 1),
        (BooleanFunction::and(3).unwrap(), 3),
    ];
    for (f, want) in named {
        let (gamma, _) = napdt::napdt(&f, Mode::Exact).unwrap();
        out.require(gamma.len() == want, || format!("{f:?}: |Γ| = {} ≠ {want}", gamma.len()));
    }
    out.detail = format!("{count} functions with n ≤ 3, named examples |Γ| = 0, 1, 3");
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let mut ratios = vec![];
    for t in [4usize, 8, 16] {
        let spec = FamilySpec::AdTt { t, tprime: t };
        let s = spec.closed_form_sparse().unwrap();
        let terms: Vec<(u128, Rational)> = s.terms().to_vec();
        let m = measures_sparse(&terms);
        out.require(m.delta == q(1, t as i64), || format!("t={t}: δ = {}", m.delta));
        let level = q(2, (t * t) as i64);
        out.require(terms.iter().filter(|x| x.0 != 0).all(|x| x.1.abs() == level), || format!("t={t}: nonempty magnitudes"));
        if t == 4 {
            let direct = split_wht(&values(&spec.make().unwrap()));
            out.require(terms_of(10, &direct) == terms, || "t=4: closed form differs from transform".into());
        }
        // steps of t ↦ dim span{S : |f̂(S)| ≥ 1/t}
        let mut mags: Vec<Rational> = terms.iter().map(|x| x.1.abs()).collect();
        mags.sort();
        mags.dedup();
        let best = mags
            .iter()
            .filter_map(|&mg| {
                let d = rank(&terms.iter().filter(|x| x.1.abs() >= mg).map(|x| x.0).collect::<Vec<_>>());
                let th = 1.0 / (mg.numer().abs() as f64 / *mg.denom() as f64);
                let ratio = th * th / d as f64;
                (d > 1 && ratio > 1.0).then(|| (d as f64).sqrt() / (th * ratio.log2().sqrt()))
            })
            .fold(f64::MIN, f64::max);
        let lib = best_chang_bound(&s).unwrap().0;
        out.require((lib - best).abs() <= FLOAT_EPS * best, || format!("t={t}: library bound {lib} vs {best}"));
        let ratio = (1.0 / t as f64) / best;
        let floor = 0.4 * (t as f64).sqrt();
        out.require(ratio > floor - FLOAT_EPS, || format!("t={t}: ratio {ratio} ≤ {floor}"));
        ratios.push(format!("t={t}: {ratio:.3} ≥ {floor:.3}"));
    }
    out.detail = ratios.join(", ");
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let grid = harness::witness_grid();
    let grid = match grid {
        Ok(g) => g,
        Err(e) => {
            out.failures.push(format!("grid instantiation: {e}"));
            return out;
        }
    };
    let mut dense = 0;
    for w in &grid {
        let n = w.spec.arity().unwrap();
        let m = if n <= 22 {
            dense += 1;
            measures(n, &split_wht(&values(&w.spec.make().unwrap())))
        } else {
            measures_sparse(w.spec.closed_form_sparse().unwrap().terms())
        };
        let f = |x: Rational| *x.numer() as f64 / *x.denom() as f64;
        for rg in &w.ranges {
            let v = match rg.measure {
                Measure::R => m.r as f64,
                Measure::K => m.k as f64,
                Measure::Kprime => f(m.kprime),
                Measure::Kdprime => f(m.kdprime),
                Measure::Delta => f(m.delta),
            };
            out.require(rg.lo <= v && v <= rg.hi, || format!("{:?} {:?}: {:?} = {v} outside [{}, {}]", w.kind, w.spec, rg.measure, rg.lo, rg.hi));
        }
    }
    out.detail = format!("{} witnesses, {dense} measured from truth tables", grid.len());
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x88);
    let mut done = 0;
    while done < RESTRICTION_PAIRS {
        let n = rng.gen_range(1..=4usize);
        let f = BooleanFunction::from_word(n, rng.gen());
        let size = rng.gen_range(1..=n);
        let gamma: Vec<u128> = (0..size).map(|_| rng.gen_range(1..1u128 << n)).collect();
        if rank(&gamma) < size {
            continue;
        }
        let v = values(&f);
        let c = split_wht(&v);
        let support: Vec<u128> = terms_of(n, &c).iter().map(|t| t.0).collect();
        let ell = classes(&support, &gamma);
        if ell < 2 {
            continue;
        }
        let k = support.len();
        let (mut sum_delta, mut sum_kplus) = (Rational::zero(), 0usize);
        let assignments = all_assignments(size);
        for b in &assignments {
            let rv = restricted_values(&v, &gamma, b);
            sum_delta += q(rv.iter().filter(|&&x| x == -1).count() as i64, rv.len() as i64);
            let g = f.restrict(&RestrictionMap::new(n, gamma.clone(), b.clone()).unwrap()).unwrap();
            out.require(values(&g).iter().filter(|&&x| x == -1).count() == rv.iter().filter(|&&x| x == -1).count(), || "restriction weight".into());
            sum_kplus += split_wht(&values(&g)).iter().skip(1).filter(|&&x| x != 0).count();
        }
        let count = int(assignments.len());
        let delta = (Rational::one() - Rational::new(c[0], 1 << n)) / 2;
        out.require(sum_delta / count == delta, || format!("n={n}: E δ = {} ≠ {delta}", sum_delta / count));
        let floor = int(ell * ell) / int(4 * k);
        out.require(int(sum_kplus) / count >= floor, || format!("n={n}: E k⁺ = {} < {floor}", int(sum_kplus) / count));
        let (lib_delta, lib_kplus) = napdt::restriction_averages(&f, &gamma).unwrap();
        out.require(lib_delta == delta && lib_kplus == int(sum_kplus) / count, || "library averages differ".into());
        done += 1;
    }
    out.detail = format!("{RESTRICTION_PAIRS} pairs with n ≤ 4 and at least two classes");
    out
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("exhaustive core invariants", criterion_1),
        ("construction tables", criterion_2),
        ("closed form equals transform", criterion_3),
        ("composition equalities", criterion_4),
        ("restriction algorithm audit", criterion_5),
        ("weight beats Chang bound", criterion_6),
        ("witness ranges", criterion_7),
        ("restriction expectations", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let status = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} {status} {name}: {} ({:.2}s)", i + 1, out.detail, start.elapsed().as_secs_f64());
        for f in out.failures.iter().take(10) {
            println!("    {f}");
        }
        failed += !out.failures.is_empty() as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
