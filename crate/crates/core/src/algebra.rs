//! Label algebras: partial commutative monoids over labels.

use std::fmt::Debug;
use std::sync::Arc;

use crate::label::Label;
use crate::port::Scope;

/// A partial composition on labels with ε as unit.
///
/// Implementors only define [`combine`](LabelAlgebra::combine) for two
/// non-identity labels; [`compose`](LabelAlgebra::compose) adds the unit.
/// ε is a strict unit whatever its scope: widening the partner's scope
/// would let `(ε·ℓ₁)·ℓ₂` fail where `ε·(ℓ₁·ℓ₂)` succeeds.
pub trait LabelAlgebra: Send + Sync + Debug {
    fn name(&self) -> &str;

    /// `ℓ₁ · ℓ₂` for non-identity labels, `None` for ⊥.
    fn combine(&self, a: &Label, b: &Label) -> Option<Label>;

    fn compose(&self, a: &Label, b: &Label) -> Option<Label> {
        match (a.is_identity(), b.is_identity()) {
            (true, true) => Some(Label::identity(a.scope().union(b.scope()))),
            (true, false) => Some(b.clone()),
            (false, true) => Some(a.clone()),
            (false, false) => self.combine(a, b),
        }
    }

    fn identity(&self, scope: Scope) -> Label {
        Label::identity(scope)
    }
}

pub type Algebra = Arc<dyn LabelAlgebra>;

pub fn same_algebra(a: &Algebra, b: &Algebra) -> bool {
    a.name() == b.name()
}

/// Folds a sequence of labels with the algebra; `None` if any step is ⊥.
pub fn compose_all<'a>(
    algebra: &dyn LabelAlgebra,
    scope: Scope,
    labels: impl IntoIterator<Item = &'a Label>,
) -> Option<Label> {
    let mut acc = Label::identity(scope);
    for l in labels {
        acc = algebra.compose(&acc, l)?;
    }
    Some(acc)
}
