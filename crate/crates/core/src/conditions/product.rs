//! Points on products of tori and elliptic curves, and their reductions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::arith::factor::factor_u64;
use crate::arith::primes::{lcm, mul_mod, pow_mod};
use crate::ec::{ec_good_reduction, ec_point_order, ec_reduce, group_order_fp, CurveFp, CurveQ, PointFp, PointQ, SCAN_LIMIT};
use crate::error::{Error, Result};
use crate::gm::order::{gm_reduce, mult_order_with};
use crate::gm::GmPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    Gm(usize),
    Ec(CurveQ),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Gm(n) => write!(f, "gm:{n}"),
            Factor::Ec(c) => write!(f, "ec:{c}"),
        }
    }
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(n) = s.strip_prefix("gm:") {
            let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("invalid torus dimension in {s:?}")))?;
            if n == 0 {
                return Err(Error::Parse("torus dimension must be positive".into()));
            }
            Ok(Factor::Gm(n))
        } else if let Some(ab) = s.strip_prefix("ec:") {
            Ok(Factor::Ec(ab.parse()?))
        } else {
            Err(Error::Parse(format!("unknown factor {s:?}, expected gm:<n> or ec:<a>,<b>")))
        }
    }
}

/// An ordered product of factors, written `gm:2*ec:0,-2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<Factor>,
}

impl GroupSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parse("empty group".into()));
        }
        Ok(GroupSpec { factors })
    }

    pub fn gm(n: usize) -> Self {
        GroupSpec { factors: vec![Factor::Gm(n)] }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_torus(&self) -> bool {
        self.factors.iter().all(|f| matches!(f, Factor::Gm(_)))
    }

    /// Parse a point on this group: components joined by `*`.
    pub fn parse_point(&self, s: &str) -> Result<ProductPoint> {
        let parts: Vec<&str> = s.split('*').collect();
        if parts.len() != self.factors.len() {
            return Err(Error::Parse(format!(
                "point {s:?} has {} components, group {self} has {}",
                parts.len(),
                self.factors.len()
            )));
        }
        let comps = self
            .factors
            .iter()
            .zip(parts)
            .map(|(f, t)| match f {
                Factor::Gm(_) => Ok(Component::Gm(t.parse()?)),
                Factor::Ec(_) => Ok(Component::Ec(t.parse()?)),
            })
            .collect::<Result<Vec<_>>>()?;
        ProductPoint::new(self.clone(), comps)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::new(s.split('*').map(str::parse).collect::<Result<Vec<_>>>()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Component {
    Gm(GmPoint),
    Ec(PointQ),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductPoint {
    group: GroupSpec,
    comps: Vec<Component>,
}

impl ProductPoint {
    pub fn new(group: GroupSpec, comps: Vec<Component>) -> Result<Self> {
        if comps.len() != group.factors.len() {
            return Err(Error::DimensionMismatch(format!("{} components for {} factors", comps.len(), group.factors.len())));
        }
        for (f, c) in group.factors.iter().zip(&comps) {
            match (f, c) {
                (Factor::Gm(n), Component::Gm(x)) if x.dim() == *n => {}
                (Factor::Gm(n), Component::Gm(x)) => {
                    return Err(Error::DimensionMismatch(format!("torus point of dimension {} on gm:{n}", x.dim())))
                }
                (Factor::Ec(e), Component::Ec(r)) => e.check(r)?,
                _ => return Err(Error::Parse(format!("component does not match factor {f}"))),
            }
        }
        Ok(ProductPoint { group, comps })
    }

    pub fn gm(point: GmPoint) -> Self {
        ProductPoint { group: GroupSpec::gm(point.dim()), comps: vec![Component::Gm(point)] }
    }

    pub fn gm_i64(coords: &[i64]) -> Result<Self> {
        Ok(Self::gm(GmPoint::from_i64(coords)?))
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn components(&self) -> &[Component] {
        &self.comps
    }

    /// The single torus component of a point on `gm:n`, if that is its shape.
    pub fn as_gm(&self) -> Option<&GmPoint> {
        match self.comps.as_slice() {
            [Component::Gm(x)] => Some(x),
            _ => None,
        }
    }

    /// All torus coordinates concatenated, if every factor is a torus.
    pub fn torus_coords(&self) -> Option<GmPoint> {
        let mut out: Option<GmPoint> = None;
        for c in &self.comps {
            let Component::Gm(x) = c else { return None };
            out = Some(match out {
                None => x.clone(),
                Some(acc) => acc.concat(x),
            });
        }
        out
    }

    /// `None` for good reduction at `p`, else the reason it is bad.
    pub fn bad_reduction(&self, p: u64) -> Option<String> {
        for (f, c) in self.group.factors.iter().zip(&self.comps) {
            match (f, c) {
                (Factor::Gm(_), Component::Gm(x)) => {
                    if gm_reduce(x, p).is_err() {
                        return Some(format!("{p} divides a coordinate of the torus point"));
                    }
                }
                (Factor::Ec(e), _) => {
                    if !ec_good_reduction(e, &[], p) {
                        return Some(format!("curve {e} has bad reduction at {p}"));
                    }
                    if p > SCAN_LIMIT {
                        return Some(format!("{p} exceeds the point-counting limit {SCAN_LIMIT}"));
                    }
                }
                _ => unreachable!("validated on construction"),
            }
        }
        None
    }

    pub fn reduce(&self, p: u64) -> Result<Reduced> {
        if self.bad_reduction(p).is_some() {
            return Err(Error::BadReduction { p });
        }
        let comps = self
            .group
            .factors
            .iter()
            .zip(&self.comps)
            .map(|(f, c)| match (f, c) {
                (Factor::Gm(_), Component::Gm(x)) => Ok(ReducedComponent::Gm(gm_reduce(x, p)?)),
                (Factor::Ec(e), Component::Ec(r)) => Ok(ReducedComponent::Ec(e.reduce_mod(p)?, ec_reduce(e, r, p)?)),
                _ => unreachable!("validated on construction"),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Reduced { p, comps })
    }
}

impl fmt::Display for ProductPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match c {
                Component::Gm(x) => write!(f, "{x}")?,
                Component::Ec(r) => write!(f, "{r}")?,
            }
        }
        Ok(())
    }
}

/// Per-prime data shared by every point reduced at that prime.
#[derive(Debug)]
pub struct PrimeContext {
    p: u64,
    unit_factors: Vec<(u64, u32)>,
    curve_orders: HashMap<CurveFp, u64>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Self {
        PrimeContext { p, unit_factors: factor_u64(p - 1), curve_orders: HashMap::new() }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// `|E(F_p)|`, memoized per curve.
    pub fn curve_order(&mut self, curve: &CurveFp) -> u64 {
        *self.curve_orders.entry(*curve).or_insert_with(|| group_order_fp(curve))
    }

    /// The exponent of the product group: lcm of `p - 1` and the curve orders.
    pub fn exponent_bound(&mut self, point: &Reduced) -> u64 {
        let mut n = 1u64;
        for c in &point.comps {
            let k = match c {
                ReducedComponent::Gm(_) => self.p - 1,
                ReducedComponent::Ec(e, _) => self.curve_order(e),
            };
            n = lcm(n, k).expect("group exponent fits in u64");
        }
        n
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducedComponent {
    Gm(Vec<u64>),
    Ec(CurveFp, PointFp),
}

/// A point of the product group over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduced {
    p: u64,
    comps: Vec<ReducedComponent>,
}

impl Reduced {
    pub fn components(&self) -> &[ReducedComponent] {
        &self.comps
    }

    pub fn from_components(p: u64, comps: Vec<ReducedComponent>) -> Self {
        Reduced { p, comps }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| match c {
            ReducedComponent::Gm(r) => r.iter().all(|&x| x == 1),
            ReducedComponent::Ec(_, r) => r.is_infinity(),
        })
    }

    pub fn zero_like(&self) -> Reduced {
        let comps = self
            .comps
            .iter()
            .map(|c| match c {
                ReducedComponent::Gm(r) => ReducedComponent::Gm(vec![1; r.len()]),
                ReducedComponent::Ec(e, _) => ReducedComponent::Ec(*e, PointFp::Infinity),
            })
            .collect();
        Reduced { p: self.p, comps }
    }

    pub fn add(&self, other: &Reduced) -> Reduced {
        let p = self.p;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| match (a, b) {
                (ReducedComponent::Gm(x), ReducedComponent::Gm(y)) => {
                    ReducedComponent::Gm(x.iter().zip(y).map(|(&u, &v)| mul_mod(u, v, p)).collect())
                }
                (ReducedComponent::Ec(e, r), ReducedComponent::Ec(_, s)) => ReducedComponent::Ec(*e, e.add(r, s)),
                _ => panic!("adding points of different groups"),
            })
            .collect();
        Reduced { p, comps }
    }

    pub fn mul(&self, k: u64) -> Reduced {
        let p = self.p;
        let comps = self
            .comps
            .iter()
            .map(|c| match c {
                ReducedComponent::Gm(x) => ReducedComponent::Gm(x.iter().map(|&u| pow_mod(u, k, p)).collect()),
                ReducedComponent::Ec(e, r) => ReducedComponent::Ec(*e, e.mul(k, r)),
            })
            .collect();
        Reduced { p, comps }
    }

    /// Order as the lcm of component orders.
    pub fn order(&self, ctx: &mut PrimeContext) -> u64 {
        let mut n = 1u64;
        for c in &self.comps {
            match c {
                ReducedComponent::Gm(x) => {
                    for &u in x {
                        let o = if ctx.p == 2 { 1 } else { mult_order_with(u, ctx.p, &ctx.unit_factors).expect("unit") };
                        n = lcm(n, o).expect("order fits");
                    }
                }
                ReducedComponent::Ec(e, r) => {
                    let total = ctx.curve_order(e);
                    let o = ec_point_order(e, r, total).expect("point on curve");
                    n = lcm(n, o).expect("order fits");
                }
            }
        }
        n
    }
}

/// Order of `point` modulo `p`; errors on bad reduction.
pub fn product_order(point: &ProductPoint, p: u64) -> Result<u64> {
    let r = point.reduce(p)?;
    Ok(r.order(&mut PrimeContext::new(p)))
}
