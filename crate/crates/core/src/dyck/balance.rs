//! Balance pairs and the effect tables of single-position changes.

use crate::hierarchy::Combine;

/// Unmatched closing (`l`) and opening (`r`) brackets of a string, i.e. the
/// shape `)^l (^r` of its reduced form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BalancePair {
    pub l: u32,
    pub r: u32,
}

impl BalancePair {
    pub const EMPTY: BalancePair = BalancePair { l: 0, r: 0 };
    pub const CLOSE: BalancePair = BalancePair { l: 1, r: 0 };
    pub const OPEN: BalancePair = BalancePair { l: 0, r: 1 };

    pub fn new(l: u32, r: u32) -> Self {
        Self { l, r }
    }

    /// Reduced form of a concatenation.
    pub fn compose(self, b: BalancePair) -> BalancePair {
        BalancePair {
            l: self.l + b.l.saturating_sub(self.r),
            r: b.r + self.r.saturating_sub(b.l),
        }
    }

    pub fn is_balanced(self) -> bool {
        self == Self::EMPTY
    }

    pub fn apply(self, e: Effect) -> BalancePair {
        BalancePair {
            l: self.l.checked_add_signed(e.dl).expect("effect keeps l non-negative"),
            r: self.r.checked_add_signed(e.dr).expect("effect keeps r non-negative"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BalanceCombine;

impl Combine for BalanceCombine {
    type Value = BalancePair;

    fn identity(&self) -> BalancePair {
        BalancePair::EMPTY
    }

    fn combine(&self, a: BalancePair, b: BalancePair) -> BalancePair {
        a.compose(b)
    }
}

/// Change of a node's pair caused by one inserted or deleted bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Effect {
    pub dl: i32,
    pub dr: i32,
}

impl Effect {
    pub const fn new(dl: i32, dr: i32) -> Self {
        Self { dl, dr }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChangeKind {
    InsertClose,
    InsertOpen,
    DeleteClose,
    DeleteOpen,
}

impl ChangeKind {
    pub const ALL: [ChangeKind; 4] = [
        ChangeKind::InsertClose,
        ChangeKind::InsertOpen,
        ChangeKind::DeleteClose,
        ChangeKind::DeleteOpen,
    ];

    pub fn table(self) -> EffectTable {
        use ChangeKind::*;
        match self {
            InsertClose => EffectTable {
                strict: false,
                first: Effect::new(1, 0),
                second: Effect::new(0, -1),
                leaf: Effect::new(1, 0),
            },
            InsertOpen => EffectTable {
                strict: true,
                first: Effect::new(-1, 0),
                second: Effect::new(0, 1),
                leaf: Effect::new(0, 1),
            },
            DeleteClose => EffectTable {
                strict: true,
                first: Effect::new(-1, 0),
                second: Effect::new(0, 1),
                leaf: Effect::new(-1, 0),
            },
            DeleteOpen => EffectTable {
                strict: false,
                first: Effect::new(1, 0),
                second: Effect::new(0, -1),
                leaf: Effect::new(0, -1),
            },
        }
    }

    /// The two effects a change of this kind can have on any node.
    pub fn effects(self) -> [Effect; 2] {
        let t = self.table();
        [t.first, t.second]
    }
}

/// For a node `x` with children `y₁, y₂`, the change is *inducing* when it
/// lies below `y₁` and `cmp(r(y₁), l(y₂))` holds (effect `first`), or lies
/// below `y₂` and it fails (effect `second`); otherwise `x` copies the
/// effect of its child. `cmp` is `<` when `strict` and `≤` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EffectTable {
    pub strict: bool,
    pub first: Effect,
    pub second: Effect,
    /// Effect on the leaf itself.
    pub leaf: Effect,
}

impl EffectTable {
    pub fn holds(&self, r1: u32, l2: u32) -> bool {
        if self.strict {
            r1 < l2
        } else {
            r1 <= l2
        }
    }

    /// Effect induced at `x` independently of the child, if any.
    pub fn induced(&self, in_first: bool, r1: u32, l2: u32) -> Option<Effect> {
        match (in_first, self.holds(r1, l2)) {
            (true, true) => Some(self.first),
            (false, false) => Some(self.second),
            _ => None,
        }
    }

    pub fn parent_effect(&self, in_first: bool, r1: u32, l2: u32, child: Effect) -> Effect {
        self.induced(in_first, r1, l2).unwrap_or(child)
    }
}
