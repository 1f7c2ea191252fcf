//! `u * v`, `u ∘ v`, the residue generators of O(V), and L(-n) reduction.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::lattice::{build_generators, residue_sum, LatticeState, UntwistedEngine};

/// Product engine for one `k`; reuses vertex-operator caches across calls.
pub struct ZhuContext {
    pub(crate) engine: UntwistedEngine,
}

impl ZhuContext {
    pub fn new(k: u32) -> Self {
        ZhuContext {
            engine: UntwistedEngine::new(k),
        }
    }

    pub fn k(&self) -> u32 {
        self.engine.k()
    }

    /// `sum_i C(wt u, i) u_{i-1} v`, extended linearly over components of `u`.
    pub fn star(&mut self, u: &LatticeState, v: &LatticeState) -> Result<LatticeState> {
        residue_sum(&mut self.engine, u, v, 1)
    }

    /// `sum_i C(wt u, i) u_{i-2} v`.
    pub fn circ(&mut self, u: &LatticeState, v: &LatticeState) -> Result<LatticeState> {
        residue_sum(&mut self.engine, u, v, 2)
    }

    /// `Res_z (1+z)^{wt u} z^{-2-n} Y(u, z) v = sum_i C(wt u, i) u_{i-n-2} v`.
    pub fn ov_residue(&mut self, u: &LatticeState, v: &LatticeState, n: i64) -> Result<LatticeState> {
        if n < 0 {
            return Err(Error::BadMode(format!("residue order {n} < 0")));
        }
        residue_sum(&mut self.engine, u, v, n + 2)
    }

    pub fn mode(&mut self, u: &LatticeState, n: i64, v: &LatticeState) -> Result<LatticeState> {
        self.engine.mode(u, n, v)
    }

    /// `L(-n) v` for `n` in Z (so `n = 0` is `L(0)`).
    pub fn l_minus(&mut self, n: i64, v: &LatticeState) -> Result<LatticeState> {
        let omega = build_generators(self.k()).omega;
        self.engine.mode(&omega, 1 - n, v)
    }
}

pub fn star(u: &LatticeState, v: &LatticeState) -> Result<LatticeState> {
    ZhuContext::new(u.k()).star(u, v)
}

pub fn circ(u: &LatticeState, v: &LatticeState) -> Result<LatticeState> {
    ZhuContext::new(u.k()).circ(u, v)
}

pub fn ov_residue(u: &LatticeState, v: &LatticeState, n: i64) -> Result<LatticeState> {
    ZhuContext::new(u.k()).ov_residue(u, v, n)
}

/// One residue generator `c * Res_z (1+z)^{wt u} z^{-2-n} Y(u,z) v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvGenerator {
    pub u: LatticeState,
    pub v: LatticeState,
    pub n: i64,
    pub coeff: Rational,
}

/// `target = sum c_i Res_z (1+z)^{wt u_i} z^{-2-n_i} Y(u_i, z) v_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvCertificate {
    pub target: LatticeState,
    pub generators: Vec<OvGenerator>,
    pub cutoff: i64,
}

impl OvCertificate {
    /// Recomputes the combination from scratch.
    pub fn evaluate(&self) -> Result<LatticeState> {
        let mut ctx = ZhuContext::new(self.target.k());
        let mut acc = LatticeState::zero(self.target.k());
        for g in &self.generators {
            acc.add_scaled_assign(&ctx.ov_residue(&g.u, &g.v, g.n)?, &g.coeff);
        }
        Ok(acc)
    }

    /// Whether the combination reproduces the target exactly.
    pub fn replays(&self) -> Result<bool> {
        Ok(self.evaluate()? == self.target)
    }
}

/// `c * L(-n_1) ... L(-n_s) base`, outermost operator first; `n = 0` is `L(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirasoroWord {
    pub coeff: Rational,
    pub ops: Vec<u32>,
    pub base: LatticeState,
}

impl VirasoroWord {
    pub fn new(coeff: Rational, ops: Vec<u32>, base: LatticeState) -> Self {
        VirasoroWord { coeff, ops, base }
    }
}

/// Output of [`l_reduce`]: `input - reduced` equals the certificate's value.
#[derive(Clone, Debug)]
pub struct LReduction {
    pub reduced: Vec<VirasoroWord>,
    pub certificate: OvCertificate,
}

/// `D_n(w) = L(-n)w - (-1)^n ((n-1)(L(-2)+L(-1)) + L(0)) w` as residue generators.
/// `D_1 = w ∘ 1`, `D_2 = -D_1`, `D_n = G_{n-3} - 2 D_{n-1} - D_{n-2}` with
/// `G_m = Res (1+z)^2 z^{-2-m} Y(omega, z) w`.
fn difference_generators(n: u32, w: &LatticeState) -> Vec<OvGenerator> {
    let k = w.k();
    let omega = build_generators(k).omega;
    let one = LatticeState::vacuum(k);
    let gen = |u: &LatticeState, v: &LatticeState, n: i64, c: Rational| OvGenerator {
        u: u.clone(),
        v: v.clone(),
        n,
        coeff: c,
    };
    // combinations as coefficient vectors over [D_1 generator, G_0, G_1, ...]
    let len = n.max(3) as usize;
    let mut d: Vec<Vec<Rational>> = vec![vec![Rational::zero(); len]; n.max(2) as usize + 1];
    d[1][0] = Rational::one();
    d[2][0] = int(-1);
    for j in 3..=n as usize {
        let mut row: Vec<Rational> = d[j - 1].iter().map(|c| c * int(-2)).collect();
        for (r, c) in row.iter_mut().zip(&d[j - 2]) {
            *r -= c;
        }
        row[j - 2] += Rational::one();
        d[j] = row;
    }
    let mut out = Vec::new();
    for (i, c) in d[n as usize].iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if i == 0 {
            out.push(gen(w, &one, 0, c.clone()));
        } else {
            out.push(gen(&omega, w, i as i64 - 1, c.clone()));
        }
    }
    out
}

fn eval_ops(ctx: &mut ZhuContext, ops: &[u32], base: &LatticeState) -> Result<LatticeState> {
    let mut v = base.clone();
    for &n in ops.iter().rev() {
        v = ctx.l_minus(n as i64, &v)?;
    }
    Ok(v)
}

/// Evaluates a combination of Virasoro words.
pub fn eval_words(words: &[VirasoroWord], k: u32) -> Result<LatticeState> {
    let mut ctx = ZhuContext::new(k);
    let mut acc = LatticeState::zero(k);
    for w in words {
        acc.add_scaled_assign(&eval_ops(&mut ctx, &w.ops, &w.base)?, &w.coeff);
    }
    Ok(acc)
}

/// Rewrites the outermost `L(-n)` with `n = 1` or `n >= 3` by
/// `L(-n) ~ (-1)^n ((n-1)(L(-2)+L(-1)) + L(0))` and collapses `L(0)` to its
/// eigenvalue, until each word is empty or starts with `L(-2)`.
/// Bases must be homogeneous.
pub fn l_reduce(words: &[VirasoroWord]) -> Result<LReduction> {
    let Some(first) = words.first() else {
        return Err(Error::EmptyInput);
    };
    let k = first.base.k();
    let mut ctx = ZhuContext::new(k);
    let mut todo: Vec<VirasoroWord> = words.to_vec();
    let mut done = Vec::new();
    let mut gens = Vec::new();
    while let Some(w) = todo.pop() {
        if w.coeff.is_zero() {
            continue;
        }
        let base_wt = w.base.weight().ok_or(Error::NotHomogeneous)?;
        let Some((&n, rest)) = w.ops.split_first() else {
            done.push(w);
            continue;
        };
        match n {
            2 => done.push(w),
            0 => {
                // L(0) acts by the weight of the inner vector
                let inner_wt = base_wt + int(rest.iter().map(|&m| m as i64).sum());
                todo.push(VirasoroWord::new(&w.coeff * inner_wt, rest.to_vec(), w.base));
            }
            _ => {
                let inner = eval_ops(&mut ctx, rest, &w.base)?;
                for g in difference_generators(n, &inner) {
                    gens.push(OvGenerator { coeff: &g.coeff * &w.coeff, ..g });
                }
                let sign = if n % 2 == 0 { int(1) } else { int(-1) };
                let nm1 = int(n as i64 - 1);
                for (op, c) in [(2u32, &sign * &nm1), (1, &sign * &nm1), (0, sign.clone())] {
                    if c.is_zero() {
                        continue;
                    }
                    let mut ops = vec![op];
                    ops.extend_from_slice(rest);
                    todo.push(VirasoroWord::new(&w.coeff * c, ops, w.base.clone()));
                }
            }
        }
    }
    let diff = eval_words(words, k)?.sub(&eval_words(&done, k)?);
    let cutoff = diff.max_weight().map(|w| w.to_integer().try_into().unwrap_or(i64::MAX)).unwrap_or(0);
    Ok(LReduction {
        reduced: done,
        certificate: OvCertificate {
            target: diff,
            generators: gens,
            cutoff,
        },
    })
}
