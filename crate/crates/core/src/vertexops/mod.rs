//! Bosonized q-vertex operators between the level `-1/2` modules, checks of
//! their intertwining relations and the two-point function.

mod intertwining;
mod twopoint;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::currents::{generator, nproduct, qdifference, CurrentExpr, Generator, Scale};
use crate::fock::FockVector;
use crate::qscalar::UScalar;
use crate::repcheck::{AlgebraAction, Op};

pub use intertwining::{check_intertwining, check_screening_anticommute, normalization_check, Condition};
pub use twopoint::{pochhammer_ratio, two_point, TwoPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VoError {
    #[error("no q-vertex operator from lambda_{0} to lambda_{1}")]
    BadPair(u32, u32),
    #[error("cannot parse pair {0:?}, expected one of 1->2, 2->1, 3->4, 4->3")]
    BadPairName(String),
    #[error("unknown vertex operator type {0:?}")]
    BadType(String),
    #[error("unknown intertwining condition {0:?}")]
    BadCondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VoType {
    /// `V(lambda) -> V(mu) (x) V_z`.
    I,
    /// `V(lambda) -> V_z (x) V(mu)`.
    II,
}

impl fmt::Display for VoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VoType::I => "I",
            VoType::II => "II",
        })
    }
}

impl FromStr for VoType {
    type Err = VoError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "I" | "i" | "1" => Ok(VoType::I),
            "II" | "ii" | "2" => Ok(VoType::II),
            other => Err(VoError::BadType(other.to_string())),
        }
    }
}

/// Tensor component `v_+` or `v_-` of the evaluation module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    Plus,
    Minus,
}

impl Component {
    pub fn other(self) -> Self {
        match self {
            Component::Plus => Component::Minus,
            Component::Minus => Component::Plus,
        }
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i32 {
        match self {
            Component::Plus => 1,
            Component::Minus => -1,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Plus => "+",
            Component::Minus => "-",
        })
    }
}

/// `sign * u^upow * z^(zpow4/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub sign: i8,
    pub upow: i32,
    pub zpow4: i32,
}

impl Normalization {
    pub fn scalar(&self) -> UScalar {
        UScalar::monomial(self.sign as i128, self.upow)
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        match self.upow {
            0 => write!(f, "1")?,
            e => write!(f, "q^{}", crate::currents::fmt_quarter(e))?,
        }
        if self.zpow4 != 0 {
            write!(f, " z^{}", crate::currents::fmt_quarter(self.zpow4))?;
        }
        Ok(())
    }
}

/// A q-vertex operator `lambda_i -> lambda_j` of either type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexPair {
    pub ty: VoType,
    pub lambda: u32,
    pub mu: u32,
}

pub const PAIRS: [(u32, u32); 4] = [(1, 2), (2, 1), (3, 4), (4, 3)];

impl VertexPair {
    pub fn new(ty: VoType, lambda: u32, mu: u32) -> Result<Self, VoError> {
        if PAIRS.contains(&(lambda, mu)) {
            Ok(VertexPair { ty, lambda, mu })
        } else {
            Err(VoError::BadPair(lambda, mu))
        }
    }

    /// Parses `"1->2"` style names.
    pub fn parse(ty: VoType, s: &str) -> Result<Self, VoError> {
        let bad = || VoError::BadPairName(s.to_string());
        let (a, b) = s.split_once("->").ok_or_else(bad)?;
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        Self::new(ty, a, b)
    }

    pub fn all() -> Vec<VertexPair> {
        let mut out = Vec::new();
        for ty in [VoType::I, VoType::II] {
            for (a, b) in PAIRS {
                out.push(VertexPair { ty, lambda: a, mu: b });
            }
        }
        out
    }

    fn index(&self) -> usize {
        PAIRS.iter().position(|p| *p == (self.lambda, self.mu)).expect("validated pair")
    }

    pub fn normalization(&self) -> Normalization {
        let n = |sign, upow, zpow4| Normalization { sign, upow, zpow4 };
        match self.ty {
            VoType::I => [n(1, 0, 0), n(-1, 6, 4), n(-1, 3, 2), n(-1, 3, 2)][self.index()],
            VoType::II => [n(-1, -4, 0), n(1, -2, 4), n(1, -1, 2), n(1, -5, 2)][self.index()],
        }
    }

    /// The component given directly by a vertex-operator current; the other
    /// one is a q-commutator of it with a Chevalley generator.
    pub fn direct(&self) -> Component {
        match self.ty {
            VoType::I => Component::Minus,
            VoType::II => Component::Plus,
        }
    }

    /// Component carrying `|mu>` at leading order in `z` (the same for both types).
    pub fn leading(&self) -> Component {
        if matches!((self.lambda, self.mu), (2, 1) | (3, 4)) {
            Component::Plus
        } else {
            Component::Minus
        }
    }

    /// Generator closing the direct component into the other one.
    pub fn closing_generator(&self) -> Op {
        match self.ty {
            VoType::I => Op::F1,
            VoType::II => Op::E1,
        }
    }

    pub fn name(&self) -> String {
        format!("{}->{}", self.lambda, self.mu)
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}->{}", self.ty, self.lambda, self.mu)
    }
}

/// Current of the direct component at argument scale `c`, without `r`:
/// type I `:J+(cz) (D Yb+)(cz):`, type II `:J-(cz) Yb-(cz):`.
pub fn vertex_current(ty: VoType, c: Scale) -> CurrentExpr {
    match ty {
        VoType::I => {
            let dy = qdifference(&generator(Generator::YbPlus, Scale::ONE))
                .and_then(|d| d.rescale(c))
                .expect("integral argument scale");
            nproduct(&[generator(Generator::JPlus, c), dy])
        }
        VoType::II => nproduct(&[generator(Generator::JMinus, c), generator(Generator::YbMinus, c)]),
    }
}

/// The direct component including its normalization.
pub fn direct_current(pair: VertexPair) -> CurrentExpr {
    let c = match pair.ty {
        VoType::I => Scale::u(6),
        VoType::II => Scale::u(-2),
    };
    let r = pair.normalization();
    vertex_current(pair.ty, c).scale(&r.scalar()).shift_z(r.zpow4)
}

/// How a component acts: either a current, or `[direct, g]_q = direct g - q g direct`.
#[derive(Debug, Clone, PartialEq)]
pub enum ComponentOperator {
    Direct(CurrentExpr),
    QCommutator { direct: CurrentExpr, with: Op },
}

pub fn phi_component(pair: VertexPair, c: Component) -> ComponentOperator {
    if c == pair.direct() {
        ComponentOperator::Direct(direct_current(pair))
    } else {
        ComponentOperator::QCommutator { direct: direct_current(pair), with: pair.closing_generator() }
    }
}

/// Operator table for the vertex operators, on top of the algebra action.
pub struct VertexSystem {
    act: AlgebraAction,
    ids: BTreeMap<VertexPair, usize>,
}

impl Default for VertexSystem {
    fn default() -> Self {
        let mut s = VertexSystem { act: AlgebraAction::default(), ids: BTreeMap::new() };
        for p in VertexPair::all() {
            s.set_direct(p, direct_current(p));
        }
        s
    }
}

impl VertexSystem {
    /// Replaces the direct component of `pair` (used for mutation tests).
    pub fn set_direct(&mut self, pair: VertexPair, e: CurrentExpr) {
        let id = self.act.register(e);
        self.ids.insert(pair, id);
        self.act.clear_cache();
    }

    pub fn action(&self) -> &AlgebraAction {
        &self.act
    }

    /// Coefficient of `z^(n4/4)` in component `c` of `pair`, applied to `v`.
    pub fn component(&self, pair: VertexPair, c: Component, n4: i32, v: &FockVector) -> FockVector {
        let direct = Op::Mode(self.ids[&pair], n4);
        if c == pair.direct() {
            return self.act.apply(direct, v);
        }
        let q = UScalar::u_pow(4);
        self.act.commutator(direct, pair.closing_generator(), &q, v)
    }

    /// Residue class mod 4 of the `z`-exponents (quarter units) of `pair`
    /// on vectors of the source module.
    pub fn mode_offset(&self, pair: VertexPair) -> i32 {
        let v = FockVector::basis(crate::repcheck::hw_vector(pair.lambda).expect("valid family"));
        let e = self.act.current(self.ids[&pair]);
        crate::currents::mode_support(e, &v, 0).iter().next().map_or(0, |n| n.rem_euclid(4))
    }

    /// Exponents `n4` of the given offset with `|n4| <= 4 window + 2`.
    pub fn modes(&self, pair: VertexPair, window: u32) -> Vec<i32> {
        let off = self.mode_offset(pair);
        let w = 4 * window as i32 + 2;
        (-w..=w).filter(|n| n.rem_euclid(4) == off).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_and_names() {
        assert!(VertexPair::new(VoType::I, 1, 3).is_err());
        let p = VertexPair::parse(VoType::II, "4->3").unwrap();
        assert_eq!(p.normalization().to_string(), "q^(-5/4) z^(1/2)");
        assert_eq!(VertexPair::parse(VoType::I, "2->1").unwrap().normalization().to_string(), "-q^(3/2) z^1");
        assert_eq!(VertexPair::all().len(), 8);
    }

    #[test]
    fn component_sector_shifts() {
        let sys = VertexSystem::default();
        let p = VertexPair::new(VoType::I, 1, 2).unwrap();
        let v = FockVector::basis(crate::repcheck::hw_vector(1).unwrap());
        for n4 in sys.modes(p, 1) {
            for (m, _) in sys.component(p, Component::Minus, n4, &v).iter() {
                assert_eq!(m.sector, crate::fock::Sector::new(2, 1));
            }
        }
    }
}
