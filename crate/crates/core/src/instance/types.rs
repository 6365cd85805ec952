use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Identity of a row in the bid-to-value table.
///
/// The derived order `Monopolist < Real(0) < ... < Real(n-1) < Pseudo` is the
/// bidder order used by jump-bidder selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BidderId {
    /// The unique bidder allowed a value mass above the infimum winning bid.
    Monopolist,
    /// Non-monopoly real bidder, zero-based index.
    Real(usize),
    /// The pseudo bidder: the limit of many i.i.d. low-impact bidders; it
    /// competes against all bidders including itself.
    Pseudo,
}

impl core::fmt::Display for BidderId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BidderId::Monopolist => write!(f, "H"),
            BidderId::Real(i) => write!(f, "{}", i + 1),
            BidderId::Pseudo => write!(f, "L"),
        }
    }
}

/// Ascending bid partition `λ_0 < λ_1 < ... < λ_{m+1}`.
///
/// `λ_0` is the infimum winning bid (zero once translated) and `λ_{m+1}` the
/// supremum bid. A partition with `m + 2` points carries `m + 1` pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    points: Vec<f64>,
}

impl Partition {
    pub fn new(points: Vec<f64>) -> Result<Self, Error> {
        if points.len() < 2 {
            return Err(Error::Structural(format!(
                "partition needs at least 2 points, got {}",
                points.len()
            )));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Number of pieces (`m + 1`).
    pub fn pieces(&self) -> usize {
        self.points.len() - 1
    }

    /// Infimum bid `λ_0`.
    pub fn infimum(&self) -> f64 {
        self.points[0]
    }

    /// Supremum bid `λ_{m+1}`.
    pub fn supremum(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Piece index holding `b`, i.e. the largest `j` with `λ_j <= b`,
    /// clamped to the last piece.
    pub fn piece_of(&self, b: f64) -> usize {
        let mut lo = 0usize;
        let mut hi = self.points.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.points[mid] <= b {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo.min(self.pieces() - 1)
    }
}

/// The `(n + 2)`-row by `(m + 1)`-column bid-to-value table.
///
/// Row order is monopolist, real bidders, pseudo bidder; entry `(σ, j)` is
/// the constant value mapped to by bids in piece `j` for bidder `σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BidToValueTable {
    #[serde(rename = "H")]
    monopolist: Vec<f64>,
    real: Vec<Vec<f64>>,
    #[serde(rename = "L")]
    pseudo: Vec<f64>,
}

impl BidToValueTable {
    pub fn new(monopolist: Vec<f64>, real: Vec<Vec<f64>>, pseudo: Vec<f64>) -> Self {
        Self { monopolist, real, pseudo }
    }

    /// Number of non-monopoly real rows.
    pub fn n(&self) -> usize {
        self.real.len()
    }

    pub fn columns(&self) -> usize {
        self.monopolist.len()
    }

    /// Total number of rows (`n + 2`).
    pub fn rows(&self) -> usize {
        self.real.len() + 2
    }

    pub fn row(&self, id: BidderId) -> &[f64] {
        match id {
            BidderId::Monopolist => &self.monopolist,
            BidderId::Real(i) => &self.real[i],
            BidderId::Pseudo => &self.pseudo,
        }
    }

    pub fn value(&self, id: BidderId, col: usize) -> f64 {
        self.row(id)[col]
    }

    pub(crate) fn row_mut(&mut self, id: BidderId) -> &mut Vec<f64> {
        match id {
            BidderId::Monopolist => &mut self.monopolist,
            BidderId::Real(i) => &mut self.real[i],
            BidderId::Pseudo => &mut self.pseudo,
        }
    }

    /// The ceiling value `φ_{H,0}`.
    pub fn ceiling_value(&self) -> f64 {
        self.monopolist[0]
    }

    /// Row ids in bidder order.
    pub fn bidder_ids(&self) -> impl Iterator<Item = BidderId> + '_ {
        core::iter::once(BidderId::Monopolist)
            .chain((0..self.real.len()).map(BidderId::Real))
            .chain(core::iter::once(BidderId::Pseudo))
    }

    /// Real (non-pseudo) row ids: monopolist first, then indexed bidders.
    pub fn real_ids(&self) -> impl Iterator<Item = BidderId> + '_ {
        core::iter::once(BidderId::Monopolist).chain((0..self.real.len()).map(BidderId::Real))
    }
}

/// Finite-atom conditional value distribution of the monopolist at the
/// infimum bid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConditionalValue {
    atoms: Vec<Atom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub v: f64,
    pub p: f64,
}

impl ConditionalValue {
    pub fn new(atoms: Vec<(f64, f64)>) -> Self {
        Self { atoms: atoms.into_iter().map(|(v, p)| Atom { v, p }).collect() }
    }

    /// Single atom carrying all mass.
    pub fn point(v: f64) -> Self {
        Self::new(alloc::vec![(v, 1.0)])
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().map(|a| (a.v, a.p))
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.v * a.p).sum()
    }

    /// CDF value `P(v)` (right-continuous).
    pub fn cdf(&self, v: f64) -> f64 {
        self.atoms.iter().filter(|a| a.v <= v).map(|a| a.p).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.p).sum()
    }

    pub fn min_value(&self) -> f64 {
        self.atoms.iter().map(|a| a.v).fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.atoms.iter().map(|a| a.v).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Classification lattice for pseudo instances; each variant refines the one
/// before it. `TwinCeiling ⇒ StrongCeiling ⇒ Ceiling`; `Floor` and `Ceiling`
/// are disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InstanceClass {
    Invalid,
    Valid,
    Discretized,
    Translated,
    Layered,
    Floor,
    Ceiling,
    StrongCeiling,
    TwinCeiling,
}

impl InstanceClass {
    /// The class or any refinement of it.
    pub fn at_least(self, other: InstanceClass) -> bool {
        use InstanceClass::*;
        match other {
            Invalid | Valid | Discretized | Translated | Layered => self >= other,
            Floor => self == Floor,
            Ceiling | StrongCeiling | TwinCeiling => self >= other,
        }
    }

    pub fn is_floor(self) -> bool {
        self == InstanceClass::Floor
    }

    pub fn is_ceiling(self) -> bool {
        self >= InstanceClass::Ceiling
    }
}

impl core::fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            InstanceClass::Invalid => "invalid",
            InstanceClass::Valid => "valid",
            InstanceClass::Discretized => "discretized",
            InstanceClass::Translated => "translated",
            InstanceClass::Layered => "layered",
            InstanceClass::Floor => "floor",
            InstanceClass::Ceiling => "ceiling",
            InstanceClass::StrongCeiling => "strong-ceiling",
            InstanceClass::TwinCeiling => "twin-ceiling",
        };
        write!(f, "{s}")
    }
}

/// Kind of jump entry: pseudo row or a real row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JumpKind {
    PseudoJump,
    RealJump,
}

/// The leftmost-then-lowest above-ceiling entry of a ceiling instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEntry {
    pub sigma_star: BidderId,
    /// Column index (`>= 1` for valid ceiling instances).
    pub j_star: usize,
    /// Jump bid `λ_{j*}`.
    pub lambda_star: f64,
    /// Jump value `φ_{σ*, j*}`.
    pub phi_star: f64,
    pub kind: JumpKind,
}

/// A valid (pseudo) bid-distribution instance in discretized form: the
/// canonical computable representation the whole crate operates on.
///
/// The JSON shape is
/// `{"partition": [λ_0, ..], "n": n, "table": {"H": [..], "real": [[..]], "L": [..]}, "cond_value": [{"v": x, "p": y}]}`
/// with every row holding one entry per partition piece; deserialization
/// re-runs the shape checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct PiecewiseInstance {
    partition: Partition,
    n: usize,
    table: BidToValueTable,
    cond_value: ConditionalValue,
}

#[derive(Deserialize)]
struct RawInstance {
    partition: Partition,
    n: usize,
    table: BidToValueTable,
    cond_value: ConditionalValue,
}

impl TryFrom<RawInstance> for PiecewiseInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self, Error> {
        if raw.n != raw.table.n() {
            return Err(Error::Structural(format!(
                "declared n = {} but the table has {} real rows",
                raw.n,
                raw.table.n()
            )));
        }
        PiecewiseInstance::new(raw.partition, raw.table, raw.cond_value)
    }
}

impl PiecewiseInstance {
    /// Assembles an instance, checking shape consistency only (dimension
    /// mismatch is a structural error, not a validation entry).
    pub fn new(
        partition: Partition,
        table: BidToValueTable,
        cond_value: ConditionalValue,
    ) -> Result<Self, Error> {
        let cols = partition.pieces();
        if table.columns() != cols {
            return Err(Error::Structural(format!(
                "table has {} columns but the partition has {} pieces",
                table.columns(),
                cols
            )));
        }
        for id in table.bidder_ids() {
            if table.row(id).len() != cols {
                return Err(Error::Structural(format!(
                    "row {id} has {} entries, expected {cols}",
                    table.row(id).len()
                )));
            }
        }
        if cond_value.atoms.is_empty() {
            return Err(Error::Structural(String::from("conditional value has no atoms")));
        }
        let n = table.n();
        Ok(Self { partition, n, table, cond_value })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn table(&self) -> &BidToValueTable {
        &self.table
    }

    pub fn cond_value(&self) -> &ConditionalValue {
        &self.cond_value
    }

    /// Count of non-monopoly real bidders.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Infimum bid `γ`.
    pub fn gamma(&self) -> f64 {
        self.partition.infimum()
    }

    /// Supremum bid `λ`.
    pub fn lambda(&self) -> f64 {
        self.partition.supremum()
    }

    /// Scales all bids, values and conditional atoms by `c > 0`.
    pub fn scale(&self, c: f64) -> Result<Self, Error> {
        if !(c > 0.0) {
            return Err(Error::Domain(format!("scale factor must be positive, got {c}")));
        }
        let partition = Partition::new(self.partition.points.iter().map(|x| x * c).collect())?;
        let table = BidToValueTable {
            monopolist: self.table.monopolist.iter().map(|x| x * c).collect(),
            real: self
                .table
                .real
                .iter()
                .map(|row| row.iter().map(|x| x * c).collect())
                .collect(),
            pseudo: self.table.pseudo.iter().map(|x| x * c).collect(),
        };
        let cond_value =
            ConditionalValue::new(self.cond_value.atoms().map(|(v, p)| (v * c, p)).collect());
        Self::new(partition, table, cond_value)
    }

    /// Appends a real bidder whose row equals the pseudo row throughout
    /// (a "dummy" with constant bid distribution one).
    pub fn with_dummy_bidder(&self) -> Result<Self, Error> {
        let mut table = self.table.clone();
        table.real.push(self.table.pseudo.clone());
        Self::new(self.partition.clone(), table, self.cond_value.clone())
    }
}
