//! Atomic equivariant classes.

use std::fmt;

use num_integer::Integer;

use super::GringError;

/// A `mu_m`-action datum: the generator `xi` of `mu_m` acts through `xi^weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionSpec {
    order: u64,
    weight: u64,
}

impl ActionSpec {
    pub fn new(order: u64, weight: i64) -> Result<Self, GringError> {
        if order == 0 {
            return Err(GringError::InvalidGenerator("action order must be positive".into()));
        }
        let weight = weight.rem_euclid(order as i64) as u64;
        Ok(ActionSpec { order, weight })
    }

    pub fn trivial() -> Self {
        ActionSpec { order: 1, weight: 0 }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn is_trivial(&self) -> bool {
        self.weight == 0
    }
}

/// The two Fermat curves `u^a + v^b = 0` and `u^a + v^b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FermatKind {
    Zero,
    One,
}

impl FermatKind {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(FermatKind::Zero),
            1 => Some(FermatKind::One),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            FermatKind::Zero => 0,
            FermatKind::One => 1,
        }
    }
}

/// The curve `{u^a + v^b = kind, uv != 0}` with `mu_m`-action
/// `xi.(u, v) = (xi^w_u u, xi^w_v v)`, `m = lcm(a, b)`, `w_u = m/a`, `w_v = m/b`.
/// Stored with `a <= b`; swapping the coordinates is an isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FermatCurve {
    kind: FermatKind,
    a: u64,
    b: u64,
}

impl FermatCurve {
    pub fn new(kind: FermatKind, a: u64, b: u64) -> Result<Self, GringError> {
        if a == 0 || b == 0 {
            return Err(GringError::InvalidGenerator("Fermat exponents must be positive".into()));
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Ok(FermatCurve { kind, a, b })
    }

    pub fn kind(&self) -> FermatKind {
        self.kind
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn m(&self) -> u64 {
        self.a.lcm(&self.b)
    }

    pub fn w_u(&self) -> u64 {
        self.m() / self.a
    }

    pub fn w_v(&self) -> u64 {
        self.m() / self.b
    }
}

/// An atomic class. The unit is the empty monomial, so there is no variant
/// for it and constructors that would produce it return `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `{c : c^d = 1}` with `xi in mu_o` acting by `c -> xi c`. `o | d`;
    /// `o = 1` is the trivial action and `o = d` the free torsor.
    MuTorsor { d: u64, order: u64 },
    Fermat(FermatCurve),
    Opaque { name: String, action_order: u64 },
}

impl Generator {
    /// The free `mu_d`-torsor; `None` for `d = 1`.
    pub fn mu(d: u64) -> Option<Self> {
        Generator::mu_with_action(d, ActionSpec { order: d.max(1), weight: 1 % d.max(1) })
            .expect("free torsor is valid")
    }

    /// `mu_d` with trivial action; `None` for `d = 1`.
    pub fn mu_trivial(d: u64) -> Option<Self> {
        Generator::mu_with_action(d, ActionSpec::trivial()).expect("trivial action is valid")
    }

    /// `mu_d` with `mu_m` acting through `xi^w`. Needs `m | w*d` so that the
    /// action lands in `mu_d`. Reduced to the effective order
    /// `m / gcd(m, w)` acting with weight 1.
    pub fn mu_with_action(d: u64, action: ActionSpec) -> Result<Option<Self>, GringError> {
        if d == 0 {
            return Err(GringError::InvalidGenerator("torsor size must be positive".into()));
        }
        let (m, w) = (action.order(), action.weight());
        if !(w as u128 * d as u128).is_multiple_of(m as u128) {
            return Err(GringError::InvalidGenerator(format!(
                "Mu({d}) cannot carry weight {w} in order {m}"
            )));
        }
        if d == 1 {
            return Ok(None);
        }
        let order = if w == 0 { 1 } else { m / m.gcd(&w) };
        Ok(Some(Generator::MuTorsor { d, order }))
    }

    pub fn fermat(kind: FermatKind, a: u64, b: u64) -> Result<Self, GringError> {
        Ok(Generator::Fermat(FermatCurve::new(kind, a, b)?))
    }

    pub fn opaque(name: impl Into<String>, action_order: u64) -> Result<Self, GringError> {
        let name = name.into();
        if action_order == 0 {
            return Err(GringError::InvalidGenerator("action order must be positive".into()));
        }
        if name.is_empty() || name.contains('"') {
            return Err(GringError::InvalidGenerator(format!("bad opaque name {name:?}")));
        }
        Ok(Generator::Opaque { name, action_order })
    }

    /// Order of the cyclic group through which the action factors.
    pub fn action_order(&self) -> u64 {
        match self {
            Generator::MuTorsor { order, .. } => *order,
            Generator::Fermat(c) => c.m(),
            Generator::Opaque { action_order, .. } => *action_order,
        }
    }

    /// Every root of unity a twisted count over `F_q` needs in `F_q`.
    pub fn required_order(&self) -> u64 {
        match self {
            Generator::MuTorsor { d, .. } => *d,
            _ => self.action_order(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::MuTorsor { d, order } if order == d => write!(f, "Mu({d})"),
            Generator::MuTorsor { d, order: 1 } => write!(f, "Mu({d},1,0)"),
            Generator::MuTorsor { d, order } => write!(f, "Mu({d},{order},1)"),
            Generator::Fermat(c) => write!(f, "Fermat{}({},{})", c.kind.index(), c.a, c.b),
            Generator::Opaque { name, action_order: 1 } => write!(f, "Opaque(\"{name}\")"),
            Generator::Opaque { name, action_order } => {
                write!(f, "Opaque(\"{name}\",{action_order})")
            }
        }
    }
}
