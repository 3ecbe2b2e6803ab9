//! The six checkers. Each prime is handled independently and in parallel;
//! outcomes are folded in prime order so reports are deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::product::{PrimeContext, ProductPoint, Reduced, ReducedComponent};
use super::report::{Condition, ConditionReport, Mode, Parameters, PrimeRange, Skipped, Violation, Witness};
use crate::arith::factor::valuation_u64;
use crate::arith::primes::{gcd, is_prime, primes_in_range};
use crate::arith::{kernel_mod, IntMatrix};
use crate::error::{Error, Result};
use crate::gm::{DlogTable, DLOG_LIMIT};

/// The first 25 primes, the default stand-in for an infinite set.
pub const DEFAULT_SAMPLE: [u64; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub lo: u64,
    pub hi: u64,
    /// Violating primes tolerated before the verdict becomes VIOLATED.
    pub budget: usize,
    /// Additive slack `d` for LSP.
    pub slack: u32,
    /// Coefficient box `[1, bound]` for combination conditions.
    pub bound: u64,
    /// Use discrete logarithms on tori when possible.
    pub exact: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { lo: 2, hi: 10_000, budget: 0, slack: 0, bound: 20, exact: true }
    }
}

impl ScanConfig {
    pub fn range(lo: u64, hi: u64) -> Self {
        ScanConfig { lo, hi, ..Default::default() }
    }

    fn primes(&self) -> Result<Vec<u64>> {
        primes_in_range(self.lo, self.hi)
    }

    fn prime_range(&self) -> PrimeRange {
        PrimeRange { lo: self.lo, hi: self.hi }
    }
}

/// Lookup and record hook for orders of points modulo primes.
pub trait OrderMemo: Sync {
    fn get(&self, point: &ProductPoint, p: u64) -> Option<u64>;
    fn put(&self, point: &ProductPoint, p: u64, order: u64);
}

enum Outcome {
    Skipped(String),
    Tested { mode: Mode, witnesses: Vec<Witness>, note: Option<String> },
}

fn tested(mode: Mode, witnesses: Vec<Witness>) -> Outcome {
    Outcome::Tested { mode, witnesses, note: None }
}

fn require_prime(ell: u64) -> Result<()> {
    if is_prime(ell) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("ell = {ell} is not prime")))
    }
}

fn same_group(points: &[ProductPoint], what: &str) -> Result<()> {
    if points.windows(2).any(|w| w[0].group() != w[1].group()) {
        return Err(Error::InvalidArgument(format!("the {what} points do not lie on one group")));
    }
    Ok(())
}

fn check_lengths(ps: &[ProductPoint], qs: &[ProductPoint]) -> Result<()> {
    if ps.is_empty() || ps.len() != qs.len() {
        return Err(Error::DimensionMismatch(format!("{} P-points and {} Q-points", ps.len(), qs.len())));
    }
    same_group(ps, "P")?;
    same_group(qs, "Q")
}

/// Positive representative in `[1, n]` of `x mod n`.
fn positive_mod(x: &BigInt, n: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(n)).to_u64().expect("residue");
    if r == 0 {
        n
    } else {
        r
    }
}

/// Runs checks against a configuration, optionally backed by an order memo.
pub struct Checker<'a> {
    cfg: &'a ScanConfig,
    memo: Option<&'a dyn OrderMemo>,
}

impl<'a> Checker<'a> {
    pub fn new(cfg: &'a ScanConfig) -> Self {
        Checker { cfg, memo: None }
    }

    pub fn with_memo(mut self, memo: &'a dyn OrderMemo) -> Self {
        self.memo = Some(memo);
        self
    }

    fn order(&self, point: &ProductPoint, reduced: &Reduced, ctx: &mut PrimeContext) -> u64 {
        let p = ctx.prime();
        if let Some(o) = self.memo.and_then(|m| m.get(point, p)) {
            return o;
        }
        let o = reduced.order(ctx);
        if let Some(m) = self.memo {
            m.put(point, p, o);
        }
        o
    }

    fn run<F>(&self, condition: Condition, parameters: Parameters, default_mode: Mode, per_prime: F) -> Result<ConditionReport>
    where
        F: Fn(u64) -> Outcome + Sync,
    {
        let primes = self.cfg.primes()?;
        let outcomes: Vec<(u64, Outcome)> = primes.par_iter().map(|&p| (p, per_prime(p))).collect();
        let mut report = ConditionReport::new(condition, self.cfg.prime_range(), self.cfg.budget, parameters, default_mode);
        let (mut exact, mut boxed) = (false, false);
        for (p, outcome) in outcomes {
            match outcome {
                Outcome::Skipped(reason) => report.skipped.push(Skipped { p, reason }),
                Outcome::Tested { mode, witnesses, note } => {
                    report.tested += 1;
                    exact |= mode == Mode::Exact;
                    boxed |= mode == Mode::Box;
                    report.violations.extend(witnesses.into_iter().map(|witness| Violation { p, witness }));
                    report.notes.extend(note);
                }
            }
        }
        report.mode = match (exact, boxed) {
            (true, true) => Mode::Mixed,
            (true, false) => Mode::Exact,
            (false, true) => Mode::Box,
            (false, false) => default_mode,
        };
        report.finalize();
        Ok(report)
    }

    /// Shared driver for conditions that compare `ord(P)` with `ord(Q)`.
    fn pairwise<J>(&self, condition: Condition, parameters: Parameters, p_pt: &ProductPoint, q_pt: &ProductPoint, judge: J) -> Result<ConditionReport>
    where
        J: Fn(u64, u64) -> Vec<Witness> + Sync,
    {
        self.run(condition, parameters, Mode::Orders, |p| {
            for (name, x) in [("P", p_pt), ("Q", q_pt)] {
                if let Some(reason) = x.bad_reduction(p) {
                    return Outcome::Skipped(format!("bad reduction of {name}: {reason}"));
                }
            }
            let mut ctx = PrimeContext::new(p);
            let op = self.order(p_pt, &p_pt.reduce(p).expect("good reduction"), &mut ctx);
            let oq = self.order(q_pt, &q_pt.reduce(p).expect("good reduction"), &mut ctx);
            tested(Mode::Orders, judge(op, oq))
        })
    }

    pub fn sp(&self, p: &ProductPoint, q: &ProductPoint) -> Result<ConditionReport> {
        self.pairwise(Condition::Sp, Parameters::default(), p, q, |op, oq| {
            if op % oq == 0 {
                vec![]
            } else {
                vec![Witness::Orders { ord_p: op, ord_q: oq }]
            }
        })
    }

    pub fn lsp(&self, p: &ProductPoint, q: &ProductPoint, ell: u64) -> Result<ConditionReport> {
        require_prime(ell)?;
        let slack = self.cfg.slack;
        let params = Parameters { ell: Some(ell), slack: Some(slack), ..Default::default() };
        let mut report = self.pairwise(Condition::Lsp, params, p, q, |op, oq| {
            let (v_p, v_q) = (valuation_u64(op, ell), valuation_u64(oq, ell));
            if v_q > v_p + slack {
                vec![Witness::Valuations { ell, slack, v_p, v_q, ord_p: op, ord_q: oq }]
            } else {
                vec![]
            }
        })?;
        if slack > 0 {
            report.notes.push(format!("slack {slack}: same as comparing P against {ell}^{slack} Q with no slack"));
        }
        Ok(report)
    }

    pub fn rsp(&self, p: &ProductPoint, q: &ProductPoint, sample: &[u64]) -> Result<ConditionReport> {
        if sample.is_empty() {
            return Err(Error::InvalidArgument("the sample of primes is empty".into()));
        }
        for &ell in sample {
            require_prime(ell)?;
        }
        let mut sample = sample.to_vec();
        sample.sort_unstable();
        sample.dedup();
        let params = Parameters { sample: Some(sample.clone()), ..Default::default() };
        let mut report = self.pairwise(Condition::Rsp, params, p, q, |op, oq| {
            sample
                .iter()
                .filter(|&&ell| op % ell != 0 && oq % ell == 0)
                .map(|&ell| Witness::Radical { ell, ord_p: op, ord_q: oq })
                .collect()
        })?;
        report.notes.push(format!("a finite sample of {} primes stands in for an infinite set", sample.len()));
        Ok(report)
    }

    fn exact_available(&self, ps: &[ProductPoint], qs: &[ProductPoint], p: u64) -> bool {
        self.cfg.exact && p <= DLOG_LIMIT && ps.iter().chain(qs).all(|x| x.group().is_torus())
    }

    fn combination_mode_note(&self, ps: &[ProductPoint], qs: &[ProductPoint], p: u64) -> Option<String> {
        if !self.cfg.exact || self.exact_available(ps, qs, p) {
            return None;
        }
        if ps.iter().chain(qs).all(|x| x.group().is_torus()) {
            Some(format!("discrete logarithms unavailable above {DLOG_LIMIT}: box mode used there"))
        } else {
            Some("elliptic factors present: box mode".to_string())
        }
    }

    /// Shared driver for MSP, WMSP and LMSP: bad reduction, then exact or box.
    fn combinations<E, B>(&self, condition: Condition, params: Parameters, ps: &[ProductPoint], qs: &[ProductPoint], exact: E, boxed: B) -> Result<ConditionReport>
    where
        E: Fn(&Logs, &Logs, u64) -> Vec<Witness> + Sync,
        B: Fn(&[Reduced], &[Reduced], &mut PrimeContext) -> Vec<Witness> + Sync,
    {
        let report = self.run(condition, params, Mode::Box, |p| {
            for (name, x) in ps.iter().map(|x| ("P", x)).chain(qs.iter().map(|x| ("Q", x))) {
                if let Some(reason) = x.bad_reduction(p) {
                    return Outcome::Skipped(format!("bad reduction of {name}: {reason}"));
                }
            }
            let rp: Vec<Reduced> = ps.iter().map(|x| x.reduce(p).expect("good reduction")).collect();
            let rq: Vec<Reduced> = qs.iter().map(|x| x.reduce(p).expect("good reduction")).collect();
            if self.exact_available(ps, qs, p) {
                let table = DlogTable::new(p).expect("within limit");
                let lp = Logs::new(&rp, &table);
                let lq = Logs::new(&rq, &table);
                return tested(Mode::Exact, exact(&lp, &lq, p));
            }
            let mut ctx = PrimeContext::new(p);
            Outcome::Tested {
                mode: Mode::Box,
                witnesses: boxed(&rp, &rq, &mut ctx),
                note: self.combination_mode_note(ps, qs, p),
            }
        })?;
        Ok(report)
    }

    pub fn msp(&self, ps: &[ProductPoint], qs: &[ProductPoint]) -> Result<ConditionReport> {
        check_lengths(ps, qs)?;
        let bound = self.bound()?;
        let params = Parameters { bound: Some(bound), ..Default::default() };
        self.combinations(
            Condition::Msp,
            params,
            ps,
            qs,
            |lp, lq, p| {
                let n = p - 1;
                uncontained_kernel_vector(lp, lq, n).map(|m| Witness::Combination { m }).into_iter().collect()
            },
            |rp, rq, _| {
                box_search(rp, rq, bound, |sp, sq| sp.is_zero() && !sq.is_zero())
                    .map(|m| Witness::Combination { m })
                    .into_iter()
                    .collect()
            },
        )
    }

    pub fn wmsp(&self, p1: &ProductPoint, p2: &ProductPoint, q1: &ProductPoint, q2: &ProductPoint) -> Result<ConditionReport> {
        let ps = [p1.clone(), p2.clone()];
        let qs = [q1.clone(), q2.clone()];
        check_lengths(&ps, &qs)?;
        let bound = self.bound()?;
        let params = Parameters { bound: Some(bound), ..Default::default() };
        self.combinations(
            Condition::Wmsp,
            params,
            &ps,
            &qs,
            |lp, lq, p| wmsp_exact(lp, lq, p - 1).map(|m| Witness::Combination { m: vec![1, m] }).into_iter().collect(),
            |rp, rq, _| {
                (1..=bound)
                    .find(|&m| rp[0].add(&rp[1].mul(m)).is_zero() && !rq[0].add(&rq[1].mul(m)).is_zero())
                    .map(|m| Witness::Combination { m: vec![1, m] })
                    .into_iter()
                    .collect()
            },
        )
    }

    pub fn lmsp(&self, ps: &[ProductPoint], qs: &[ProductPoint], ell: u64) -> Result<ConditionReport> {
        check_lengths(ps, qs)?;
        require_prime(ell)?;
        let bound = self.bound()?;
        let params = Parameters { ell: Some(ell), bound: Some(bound), ..Default::default() };
        self.combinations(
            Condition::Lmsp,
            params,
            ps,
            qs,
            |lp, lq, p| {
                let v = valuation_u64(p - 1, ell);
                if v == 0 {
                    return vec![];
                }
                let k = ell.pow(v);
                let Some(m) = uncontained_kernel_vector(lp, lq, k) else { return vec![] };
                let (sp, sq) = (lp.combine(&m, p), lq.combine(&m, p));
                let mut ctx = PrimeContext::new(p);
                vec![Witness::CoprimeCombination { ell, ord_p: sp.order(&mut ctx), ord_q: sq.order(&mut ctx), m }]
            },
            |rp, rq, ctx| {
                let mut found = None;
                box_search(rp, rq, bound, |sp, sq| {
                    let op = sp.order(ctx);
                    if op % ell == 0 {
                        return false;
                    }
                    let oq = sq.order(ctx);
                    if oq % ell == 0 {
                        found = Some((op, oq));
                        return true;
                    }
                    false
                })
                .map(|m| {
                    let (ord_p, ord_q) = found.expect("set with the witness");
                    Witness::CoprimeCombination { ell, m, ord_p, ord_q }
                })
                .into_iter()
                .collect()
            },
        )
    }

    fn bound(&self) -> Result<u64> {
        if self.cfg.bound == 0 {
            return Err(Error::InvalidArgument("the coefficient box bound must be at least 1".into()));
        }
        Ok(self.cfg.bound)
    }
}

/// Discrete logarithms of reduced torus points: one row per point.
pub struct Logs {
    rows: Vec<Vec<u64>>,
    reduced: Vec<Reduced>,
}

impl Logs {
    fn new(points: &[Reduced], table: &DlogTable) -> Self {
        let rows = points
            .iter()
            .map(|r| {
                r.components()
                    .iter()
                    .flat_map(|c| match c {
                        ReducedComponent::Gm(x) => x.iter().map(|&u| table.log(u).expect("unit")).collect::<Vec<_>>(),
                        ReducedComponent::Ec(..) => unreachable!("exact mode is torus only"),
                    })
                    .collect()
            })
            .collect();
        Logs { rows, reduced: points.to_vec() }
    }

    fn matrix(&self, modulus: u64) -> IntMatrix {
        let k = self.rows[0].len();
        let rows = self.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x % modulus)).collect()).collect();
        IntMatrix::from_rows(k, rows).expect("rectangular")
    }

    /// `sum m_i * row_i (mod modulus)` is zero.
    fn annihilates(&self, m: &[u64], modulus: u64) -> bool {
        let k = self.rows[0].len();
        (0..k).all(|j| {
            let s: u128 = self.rows.iter().zip(m).map(|(r, &mi)| r[j] as u128 * mi as u128).sum();
            s % modulus as u128 == 0
        })
    }

    fn combine(&self, m: &[u64], _p: u64) -> Reduced {
        self.reduced
            .iter()
            .zip(m)
            .fold(self.reduced[0].zero_like(), |acc, (r, &mi)| acc.add(&r.mul(mi)))
    }
}

/// A basis vector of `{m : sum m_i P_i = 0 (mod modulus)}` outside the
/// matching kernel for the `Q` side, shifted to positive entries.
fn uncontained_kernel_vector(lp: &Logs, lq: &Logs, modulus: u64) -> Option<Vec<u64>> {
    let kernel = kernel_mod(&lp.matrix(modulus), &BigInt::from(modulus));
    kernel.basis_rows().into_iter().find_map(|row| {
        // modulus * e_i lies in both kernels, so the shift keeps membership
        let m: Vec<u64> = row.iter().map(|x| positive_mod(x, modulus)).collect();
        debug_assert!(lp.annihilates(&m, modulus));
        (!lq.annihilates(&m, modulus)).then_some(m)
    })
}

/// Solve `a x = b (mod n)`: `Some((x0, n'))` with all solutions `x0 + n' Z`.
fn solve_linear(a: u64, b: u64, n: u64) -> Option<(u64, u64)> {
    let g = gcd(a % n, n);
    let g = if g == 0 { n } else { g };
    if b % g != 0 {
        return None;
    }
    let n1 = n / g;
    if n1 == 1 {
        return Some((0, 1));
    }
    let a1 = (a / g) % n1;
    let inv = crate::arith::primes::inv_mod(a1, n1).expect("coprime after division");
    Some((((b / g) as u128 * inv as u128 % n1 as u128) as u64, n1))
}

/// Merge `x = r1 (mod m1)` and `x = r2 (mod m2)`.
fn crt(r1: u64, m1: u64, r2: u64, m2: u64) -> Option<(u64, u64)> {
    let g = gcd(m1, m2);
    let diff = (r2 as i128 - r1 as i128).rem_euclid(m2 as i128) as u64;
    if diff % g != 0 {
        return None;
    }
    let (t, step) = solve_linear(m1 % m2, diff, m2)?;
    debug_assert_eq!(step, m2 / g);
    let l = m1 / g * m2;
    let x = (r1 as u128 + m1 as u128 * t as u128) % l as u128;
    Some((x as u64, l))
}

/// A positive `m` with `P1 + m P2 = 0` but `Q1 + m Q2 != 0`, from logs mod `n`.
fn wmsp_exact(lp: &Logs, lq: &Logs, n: u64) -> Option<u64> {
    // premise: m v2 = -v1 coordinatewise, an arithmetic progression or empty
    let (v1, v2) = (&lp.rows[0], &lp.rows[1]);
    let mut sol = (0u64, 1u64);
    for (&a, &b) in v1.iter().zip(v2) {
        let (r, m) = solve_linear(b, (n - a % n) % n, n)?;
        sol = crt(sol.0, sol.1, r, m)?;
    }
    let (r, step) = sol;
    let r = if r == 0 { step } else { r };
    let (w1, w2) = (&lq.rows[0], &lq.rows[1]);
    let vanishes = |m: u64| w1.iter().zip(w2).all(|(&a, &b)| (a as u128 + m as u128 * b as u128) % n as u128 == 0);
    if !vanishes(r) {
        Some(r)
    } else if !vanishes(r + step) {
        Some(r + step)
    } else {
        None
    }
}

/// First `m` in `[1, bound]^n` (lexicographic) accepted by `violates`.
fn box_search<F>(rp: &[Reduced], rq: &[Reduced], bound: u64, mut violates: F) -> Option<Vec<u64>>
where
    F: FnMut(&Reduced, &Reduced) -> bool,
{
    let table = |pts: &[Reduced]| -> Vec<Vec<Reduced>> {
        pts.iter()
            .map(|r| {
                let mut out = Vec::with_capacity(bound as usize);
                let mut acc = r.clone();
                for _ in 0..bound {
                    out.push(acc.clone());
                    acc = acc.add(r);
                }
                out
            })
            .collect()
    };
    let (tp, tq) = (table(rp), table(rq));
    let n = rp.len();
    let mut idx = vec![0usize; n];
    loop {
        let sp = (1..n).fold(tp[0][idx[0]].clone(), |acc, i| acc.add(&tp[i][idx[i]]));
        let sq = (1..n).fold(tq[0][idx[0]].clone(), |acc, i| acc.add(&tq[i][idx[i]]));
        if violates(&sp, &sq) {
            return Some(idx.iter().map(|&i| i as u64 + 1).collect());
        }
        // odometer, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if (idx[k] as u64) < bound {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub fn check_sp(p: &ProductPoint, q: &ProductPoint, cfg: &ScanConfig) -> Result<ConditionReport> {
    Checker::new(cfg).sp(p, q)
}

pub fn check_lsp(p: &ProductPoint, q: &ProductPoint, ell: u64, cfg: &ScanConfig) -> Result<ConditionReport> {
    Checker::new(cfg).lsp(p, q, ell)
}

pub fn check_rsp(p: &ProductPoint, q: &ProductPoint, sample: &[u64], cfg: &ScanConfig) -> Result<ConditionReport> {
    Checker::new(cfg).rsp(p, q, sample)
}

pub fn check_msp(ps: &[ProductPoint], qs: &[ProductPoint], cfg: &ScanConfig) -> Result<ConditionReport> {
    Checker::new(cfg).msp(ps, qs)
}

pub fn check_wmsp(
    p1: &ProductPoint,
    p2: &ProductPoint,
    q1: &ProductPoint,
    q2: &ProductPoint,
    cfg: &ScanConfig,
) -> Result<ConditionReport> {
    Checker::new(cfg).wmsp(p1, p2, q1, q2)
}

pub fn check_lmsp(ps: &[ProductPoint], qs: &[ProductPoint], ell: u64, cfg: &ScanConfig) -> Result<ConditionReport> {
    Checker::new(cfg).lmsp(ps, qs, ell)
}

/// Recompute a violation from its witness. `ps` and `qs` are the points the
/// report was produced from (one each for the order conditions).
pub fn recheck(ps: &[ProductPoint], qs: &[ProductPoint], violation: &Violation) -> Result<bool> {
    let p = violation.p;
    let mut ctx = PrimeContext::new(p);
    let rp = ps.iter().map(|x| x.reduce(p)).collect::<Result<Vec<_>>>()?;
    let rq = qs.iter().map(|x| x.reduce(p)).collect::<Result<Vec<_>>>()?;
    let combine = |pts: &[Reduced], m: &[u64]| -> Result<Reduced> {
        if m.len() != pts.len() {
            return Err(Error::DimensionMismatch(format!("{} coefficients for {} points", m.len(), pts.len())));
        }
        Ok(pts.iter().zip(m).fold(pts[0].zero_like(), |acc, (r, &mi)| acc.add(&r.mul(mi))))
    };
    let orders = |ctx: &mut PrimeContext| (rp[0].order(ctx), rq[0].order(ctx));
    Ok(match &violation.witness {
        Witness::Orders { ord_p, ord_q } => {
            let (op, oq) = orders(&mut ctx);
            (op, oq) == (*ord_p, *ord_q) && op % oq != 0
        }
        Witness::Valuations { ell, slack, v_p, v_q, ord_p, ord_q } => {
            let (op, oq) = orders(&mut ctx);
            (op, oq) == (*ord_p, *ord_q)
                && valuation_u64(op, *ell) == *v_p
                && valuation_u64(oq, *ell) == *v_q
                && v_q > &(v_p + slack)
        }
        Witness::Radical { ell, ord_p, ord_q } => {
            let (op, oq) = orders(&mut ctx);
            (op, oq) == (*ord_p, *ord_q) && op % ell != 0 && oq % ell == 0
        }
        Witness::Combination { m } => {
            m.iter().all(|&x| x >= 1) && combine(&rp, m)?.is_zero() && !combine(&rq, m)?.is_zero()
        }
        Witness::CoprimeCombination { ell, m, ord_p, ord_q } => {
            let op = combine(&rp, m)?.order(&mut ctx);
            let oq = combine(&rq, m)?.order(&mut ctx);
            m.iter().all(|&x| x >= 1) && (op, oq) == (*ord_p, *ord_q) && op % ell != 0 && oq % ell == 0
        }
    })
}
