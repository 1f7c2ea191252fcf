//! Randomized exact commutator checks on M(1), V_{L°} and the twisted modules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checks::{Check, Provenance};
use crate::error::Result;
use crate::exact::{int, rat, Rational};
use crate::fock::{mode_with, FockVector, NamedHeisState};
use crate::freefield::{FreeField, Grading};
use crate::lattice::{build_generators, LatticeState, UntwistedEngine};
use crate::twisted::{twisted_alpha, TwistedEngine, TwistedState};

/// Where the sampled states live.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Fock,
    Lattice,
    Twisted,
}

impl Space {
    pub fn as_str(self) -> &'static str {
        match self {
            Space::Fock => "fock",
            Space::Lattice => "lattice",
            Space::Twisted => "twisted",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub k: u32,
    pub seed: u64,
    pub samples: usize,
    /// Upper bound for the weight of sampled states.
    pub max_weight: u32,
}

impl SuiteConfig {
    pub fn new(k: u32) -> Self {
        SuiteConfig {
            k,
            seed: 0x5eed_0001,
            samples: 100,
            max_weight: 10,
        }
    }
}

/// Random partition of `w` into parts from `parts(i)` (raw indices).
fn random_partition(rng: &mut ChaCha8Rng, w: u32, step: u32) -> Vec<u32> {
    // step 1: all positive integers; step 2: odd raw indices (half-odd levels)
    let mut out = Vec::new();
    let mut left = w;
    while left > 0 {
        let max = left;
        let mut p = rng.gen_range(1..=max);
        if step == 2 && p % 2 == 0 {
            p -= 1;
        }
        out.push(p);
        left -= p;
    }
    out
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut n = rng.gen_range(-5i64..=5);
    if n == 0 {
        n = 1;
    }
    rat(n, rng.gen_range(1i64..=4))
}

fn random_fock(rng: &mut ChaCha8Rng, max_w: u32) -> FockVector {
    let mut v = FockVector::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let w = rng.gen_range(0..=max_w);
        let levels = random_partition(rng, w, 1);
        v = v.add(&FockVector::monomial(&levels, small_rational(rng)));
    }
    v
}

fn random_lattice(rng: &mut ChaCha8Rng, k: u32, max_w: u32) -> LatticeState {
    let two_k = 2 * k as i64;
    let coset = rng.gen_range(0..two_k);
    let mut v = LatticeState::zero(k);
    for _ in 0..rng.gen_range(1..=3) {
        // labels coset + 2kj with weight (coset + 2kj)^2 / 4k <= max_w
        let labels: Vec<i64> = (-4i64..=4)
            .map(|j| coset + two_k * j)
            .filter(|n| n * n <= 4 * k as i64 * max_w as i64)
            .collect();
        let num = labels[rng.gen_range(0..labels.len())];
        let room = max_w as i64 - (num * num + 4 * k as i64 - 1) / (4 * k as i64);
        let w = rng.gen_range(0..=room.max(0) as u32);
        let levels = random_partition(rng, w, 1);
        v = v.add(&LatticeState::term(&levels, num, small_rational(rng), k));
    }
    v
}

fn random_twisted(rng: &mut ChaCha8Rng, k: u32, max_w: u32) -> Result<TwistedState> {
    let sector = rng.gen_range(1..=2u8);
    let mut v = TwistedState::zero(k, sector)?;
    for _ in 0..rng.gen_range(1..=3) {
        let raw = rng.gen_range(0..=2 * max_w.saturating_sub(1));
        let levels = random_partition(rng, raw, 2);
        v = v.add(&TwistedState::monomial(k, sector, &levels, small_rational(rng))?);
    }
    Ok(v)
}

/// Tally of one relation over many samples.
struct Tally {
    name: String,
    total: usize,
    /// Samples where the right-hand side is nonzero.
    nontrivial: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: String) -> Self {
        Tally {
            name,
            total: 0,
            nontrivial: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, nonzero: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        self.nontrivial += nonzero as usize;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) -> Check {
        let passed = self.total - self.failures.len();
        let mut actual = format!("{passed}/{} ({} nonzero)", self.total, self.nontrivial);
        if let Some(f) = self.failures.first() {
            actual.push_str(&format!(" (first failure: {f})"));
        }
        Check::new(
            self.name,
            self.failures.is_empty(),
            format!("{0}/{0}", self.total),
            actual,
            Provenance::Stated,
        )
    }
}

/// Runs the Heisenberg, Virasoro (c = 1), `[L, J]` and (outside M(1))
/// `[L, E]` relations on `cfg.samples` random states each.
pub fn commutator_suite(space: Space, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    match space {
        Space::Fock => fock_suite(cfg),
        Space::Lattice => lattice_suite(cfg),
        Space::Twisted => twisted_suite(cfg),
    }
}

fn delta(a: i64, b: i64) -> bool {
    a + b == 0
}

fn pick_pair(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> (i64, i64) {
    let m = rng.gen_range(lo..=hi);
    let n = if rng.gen_bool(0.3) { -m } else { rng.gen_range(lo..=hi) };
    (m, n)
}

fn virasoro_rhs(m: i64, n: i64) -> Rational {
    if delta(m, n) {
        rat(m * m * m - m, 12)
    } else {
        int(0)
    }
}

fn fock_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let k = cfg.k;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut field = FreeField::new(k, Grading::Integral);
    let alpha = FockVector::monomial(&[1], int(1));
    let omega = NamedHeisState::Omega.value(k);
    let j = NamedHeisState::J.value(k);
    let two_k = int(2 * k as i64);

    let mut heis = Tally::new("fock: [a(m), a(n)] = 2km delta".into());
    for _ in 0..cfg.samples {
        let w = random_fock(&mut rng, cfg.max_weight);
        let (m, n) = pick_pair(&mut rng, -5, 5);
        let mut a = |p: i64, v: &FockVector| mode_with(&mut field, &alpha, p, v);
        let an = a(n, &w);
        let am = a(m, &w);
        let lhs = a(m, &an).sub(&a(n, &am));
        let rhs = if delta(m, n) { w.scale(&(&two_k * int(m))) } else { FockVector::zero() };
        heis.record(lhs == rhs, !rhs.is_zero(), || format!("m={m} n={n} w={w}"));
    }

    let mut vir = Tally::new("fock: Virasoro c=1".into());
    for _ in 0..cfg.samples {
        let w = random_fock(&mut rng, cfg.max_weight);
        let (m, n) = pick_pair(&mut rng, -3, 3);
        let mut l = |p: i64, v: &FockVector| mode_with(&mut field, &omega, p + 1, v);
        let ln = l(n, &w);
        let lm = l(m, &w);
        let lhs = l(m, &ln).sub(&l(n, &lm));
        let rhs = l(m + n, &w).scale(&int(m - n)).add(&w.scale(&virasoro_rhs(m, n)));
        vir.record(lhs == rhs, !rhs.is_zero(), || format!("m={m} n={n} w={w}"));
    }

    let mut lj = Tally::new("fock: [L(m), J_n] = (3(m+1)-n) J_{m+n}".into());
    for _ in 0..cfg.samples {
        let w = random_fock(&mut rng, cfg.max_weight.saturating_sub(4));
        let m = rng.gen_range(-2..=2i64);
        let n = rng.gen_range(-2..=6i64);
        let lhs = {
            let jn = mode_with(&mut field, &j, n, &w);
            let lm = mode_with(&mut field, &omega, m + 1, &w);
            mode_with(&mut field, &omega, m + 1, &jn).sub(&mode_with(&mut field, &j, n, &lm))
        };
        let rhs = mode_with(&mut field, &j, m + n, &w).scale(&int(3 * (m + 1) - n));
        lj.record(lhs == rhs, !rhs.is_zero(), || format!("m={m} n={n} w={w}"));
    }
    Ok(vec![heis.finish(), vir.finish(), lj.finish()])
}

fn lattice_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let k = cfg.k;
    let kk = k as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x1a77);
    let mut eng = UntwistedEngine::new(k);
    let g = build_generators(k);
    let alpha = LatticeState::term(&[1], 0, int(1), k);

    let mut heis = Tally::new("lattice: [a(m), a(n)] = 2km delta".into());
    for _ in 0..cfg.samples {
        let w = random_lattice(&mut rng, k, cfg.max_weight);
        let (m, n) = pick_pair(&mut rng, -5, 5);
        let am_an = eng.mode(&alpha, n, &w).and_then(|v| eng.mode(&alpha, m, &v))?;
        let an_am = eng.mode(&alpha, m, &w).and_then(|v| eng.mode(&alpha, n, &v))?;
        let rhs = if delta(m, n) { w.scale(&int(2 * kk * m)) } else { LatticeState::zero(k) };
        heis.record(am_an.sub(&an_am) == rhs, !rhs.is_zero(), || format!("m={m} n={n} w={w}"));
    }

    let mut vir = Tally::new("lattice: Virasoro c=1".into());
    for _ in 0..cfg.samples {
        let w = random_lattice(&mut rng, k, cfg.max_weight);
        let (m, n) = pick_pair(&mut rng, -3, 3);
        let lm_ln = eng.mode(&g.omega, n + 1, &w).and_then(|v| eng.mode(&g.omega, m + 1, &v))?;
        let ln_lm = eng.mode(&g.omega, m + 1, &w).and_then(|v| eng.mode(&g.omega, n + 1, &v))?;
        let rhs = eng
            .mode(&g.omega, m + n + 1, &w)?
            .scale(&int(m - n))
            .add(&w.scale(&virasoro_rhs(m, n)));
        vir.record(lm_ln.sub(&ln_lm) == rhs, !rhs.is_zero(), || format!("m={m} n={n} w={w}"));
    }

    let primaries = [
        ("lattice: [L(m), J_n] = (3(m+1)-n) J_{m+n}", &g.j, 4i64, -2i64, 6i64),
        ("lattice: [L(m), E_n] = ((k-1)(m+1)-n) E_{m+n}", &g.e, kk, kk - 4, kk + 2),
    ];
    let mut out = vec![heis.finish(), vir.finish()];
    for (name, u, wt, lo, hi) in primaries {
        let mut t = Tally::new(name.into());
        for _ in 0..cfg.samples {
            let w = random_lattice(&mut rng, k, cfg.max_weight.saturating_sub(wt as u32).max(2));
            let m = rng.gen_range(-2..=2i64);
            let n = rng.gen_range(lo..=hi);
            let a = eng.mode(u, n, &w).and_then(|v| eng.mode(&g.omega, m + 1, &v))?;
            let b = eng.mode(&g.omega, m + 1, &w).and_then(|v| eng.mode(u, n, &v))?;
            let rhs = eng.mode(u, m + n, &w)?.scale(&int((wt - 1) * (m + 1) - n));
            t.record(a.sub(&b) == rhs, !rhs.is_zero(), || format!("m={m} n={n} w={w}"));
        }
        out.push(t.finish());
    }
    Ok(out)
}

fn twisted_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let k = cfg.k;
    let kk = k as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7157);
    let mut eng = TwistedEngine::new(k);
    let g = build_generators(k);
    let alpha = LatticeState::term(&[1], 0, int(1), k);

    let mut heis = Tally::new("twisted: [a(m), a(n)] = 2km delta, m, n in 1/2 + Z".into());
    for _ in 0..cfg.samples {
        let w = random_twisted(&mut rng, k, cfg.max_weight)?;
        let odd = |r: &mut ChaCha8Rng| 2 * r.gen_range(-4..=3i64) + 1;
        let m2 = odd(&mut rng);
        let n2 = if rng.gen_bool(0.3) { -m2 } else { odd(&mut rng) };
        // alpha(n) through the twisted vertex operator of a(-1)1
        let via_vo = eng.mode(&alpha, n2, &w)?;
        let direct = twisted_alpha(n2, &w)?;
        let am = eng.mode(&alpha, m2, &w)?;
        let lhs = eng.mode(&alpha, m2, &via_vo)?.sub(&eng.mode(&alpha, n2, &am)?);
        let rhs = if m2 + n2 == 0 { w.scale(&rat(2 * kk * m2, 2)) } else { w.scale(&int(0)) };
        heis.record(lhs == rhs && via_vo == direct, !rhs.is_zero(), || format!("m={}/2 n={}/2 w={w}", m2, n2));
    }

    let mut vir = Tally::new("twisted: Virasoro c=1".into());
    for _ in 0..cfg.samples {
        let w = random_twisted(&mut rng, k, cfg.max_weight)?;
        let (m, n) = pick_pair(&mut rng, -3, 3);
        let mut l = |p: i64, v: &TwistedState| eng.mode(&g.omega, 2 * (p + 1), v);
        let ln = l(n, &w)?;
        let lm = l(m, &w)?;
        let lhs = l(m, &ln)?.sub(&l(n, &lm)?);
        let rhs = l(m + n, &w)?.scale(&int(m - n)).add(&w.scale(&virasoro_rhs(m, n)));
        vir.record(lhs == rhs, !rhs.is_zero(), || format!("m={m} n={n} w={w}"));
    }

    let primaries = [
        ("twisted: [L(m), J_n] = (3(m+1)-n) J_{m+n}", &g.j, 4i64, -2i64, 6i64),
        ("twisted: [L(m), E_n] = ((k-1)(m+1)-n) E_{m+n}", &g.e, kk, kk - 4, kk + 2),
    ];
    let mut out = vec![heis.finish(), vir.finish()];
    for (name, u, wt, lo, hi) in primaries {
        let mut t = Tally::new(name.into());
        for _ in 0..cfg.samples {
            let w = random_twisted(&mut rng, k, cfg.max_weight.saturating_sub(wt as u32).max(2))?;
            let m = rng.gen_range(-2..=2i64);
            let n = rng.gen_range(lo..=hi);
            let a = eng.mode(u, 2 * n, &w).and_then(|v| eng.mode(&g.omega, 2 * (m + 1), &v))?;
            let b = eng.mode(&g.omega, 2 * (m + 1), &w).and_then(|v| eng.mode(u, 2 * n, &v))?;
            let rhs = eng.mode(u, 2 * (m + n), &w)?.scale(&int((wt - 1) * (m + 1) - n));
            t.record(a.sub(&b) == rhs, !rhs.is_zero(), || format!("m={m} n={n} w={w}"));
        }
        out.push(t.finish());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for k in [1u32, 2, 3] {
            let cfg = SuiteConfig { samples: 12, max_weight: 6, ..SuiteConfig::new(k) };
            for space in [Space::Fock, Space::Lattice, Space::Twisted] {
                for c in commutator_suite(space, &cfg).unwrap() {
                    assert!(!c.status.is_failure(), "k={k} {}: {}", c.name, c.actual);
                }
            }
        }
    }

    #[test]
    fn partitions_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for w in 0..12 {
            assert_eq!(random_partition(&mut rng, w, 1).iter().sum::<u32>(), w);
            let odd = random_partition(&mut rng, w, 2);
            assert!(odd.iter().all(|p| p % 2 == 1));
            assert_eq!(odd.iter().sum::<u32>(), w);
        }
    }
}
