use std::fmt::Debug;
use std::hash::Hash;

use super::ChainLabeler;
use crate::poset::product::step_coordinate;
use crate::poset::{ChainCoordinates, ElemId, RankedPoset};

/// Labels a cover of a product of chains by the (1-based) coordinate it
/// advances, i.e. by its join-irreducible.
#[derive(Clone, Copy, Debug)]
pub struct NaturalLabeler<'a> {
    poset: &'a RankedPoset<ChainCoordinates>,
}

impl<'a> NaturalLabeler<'a> {
    pub fn new(poset: &'a RankedPoset<ChainCoordinates>) -> Self {
        NaturalLabeler { poset }
    }
}

impl ChainLabeler for NaturalLabeler<'_> {
    type Label = usize;
    type State = ();

    fn initial_state(&self) {}

    fn label_cover(&self, _: &(), from: ElemId, to: ElemId) -> (usize, ()) {
        (step_coordinate(self.poset.element(from), self.poset.element(to)) + 1, ())
    }
}

/// An edge labeling given by a function of the cover.
#[derive(Clone, Copy, Debug)]
pub struct EdgeLabeler<F> {
    f: F,
}

impl<F> EdgeLabeler<F> {
    pub fn new(f: F) -> Self {
        EdgeLabeler { f }
    }
}

impl<F, L> ChainLabeler for EdgeLabeler<F>
where
    F: Fn(ElemId, ElemId) -> L,
    L: Copy + Ord + Hash + Debug + Send + Sync,
{
    type Label = L;
    type State = ();

    fn initial_state(&self) {}

    fn label_cover(&self, _: &(), from: ElemId, to: ElemId) -> (L, ()) {
        ((self.f)(from, to), ())
    }
}
