//! The poset of shuffles `W(M,N)` as a [`RankedPoset`] of words, with the
//! letter moved by every cover precomputed.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::poset::{ElemId, RankedPoset};
use crate::word::{upper_covers, Letter, ShuffleContext, ShuffleWord};

/// What a single cover does to a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverStep {
    /// An upper letter is inserted.
    Insert(Letter),
    /// A lower letter is deleted; `after` is the upper letter immediately
    /// preceding it, if any.
    Delete { letter: Letter, after: Option<Letter> },
}

/// Classify `u < v` as a cover, or `None` if it is not one.
pub fn cover_step(u: &ShuffleWord, v: &ShuffleWord) -> Option<CoverStep> {
    let (a, b) = (u.letters(), v.letters());
    if b.len() == a.len() + 1 {
        let pos = a.iter().zip(b).position(|(x, y)| x != y).unwrap_or(a.len());
        let inserted = b[pos];
        (inserted.is_upper() && a[pos..] == b[pos + 1..]).then_some(CoverStep::Insert(inserted))
    } else if a.len() == b.len() + 1 {
        let pos = a.iter().zip(b).position(|(x, y)| x != y).unwrap_or(b.len());
        let deleted = a[pos];
        if !deleted.is_lower() || a[pos + 1..] != b[pos..] {
            return None;
        }
        let after = pos.checked_sub(1).map(|p| a[p]).filter(|l| l.is_upper());
        Some(CoverStep::Delete { letter: deleted, after })
    } else {
        None
    }
}

#[derive(Clone, Debug)]
pub struct ShufflePoset {
    ctx: ShuffleContext,
    poset: RankedPoset<ShuffleWord>,
    steps: Vec<Vec<CoverStep>>,
}

impl ShufflePoset {
    pub fn new(ctx: ShuffleContext) -> Self {
        let poset = RankedPoset::build(ctx.bottom(), |w| upper_covers(w, ctx))
            .expect("posets of shuffles are graded with a unique top");
        let steps = (0..poset.len())
            .map(|u| {
                poset
                    .upper_covers(u)
                    .iter()
                    .map(|&v| {
                        cover_step(poset.element(u), poset.element(v)).expect("generated cover")
                    })
                    .collect()
            })
            .collect();
        ShufflePoset { ctx, poset, steps }
    }

    pub fn with_sizes(lower: u16, upper: u16) -> Self {
        Self::new(ShuffleContext::new(lower, upper))
    }

    pub fn context(&self) -> ShuffleContext {
        self.ctx
    }

    pub fn poset(&self) -> &RankedPoset<ShuffleWord> {
        &self.poset
    }

    /// The step taken by the cover `u < v`.
    pub fn step(&self, u: ElemId, v: ElemId) -> Option<CoverStep> {
        let i = self.poset.upper_covers(u).binary_search(&v).ok()?;
        Some(self.steps[u][i])
    }

    pub fn id(&self, w: &ShuffleWord) -> Result<ElemId> {
        self.poset.id_of(w).ok_or_else(|| {
            Error::InvalidWord(format!(
                "{w} is not a word of W({},{})",
                self.ctx.lower, self.ctx.upper
            ))
        })
    }

    pub fn words(&self, ids: &[ElemId]) -> Vec<ShuffleWord> {
        ids.iter().map(|&i| self.poset.element(i).clone()).collect()
    }

    pub fn ids(&self, words: &[ShuffleWord]) -> Result<Vec<ElemId>> {
        words.iter().map(|w| self.id(w)).collect()
    }
}

impl Deref for ShufflePoset {
    type Target = RankedPoset<ShuffleWord>;

    fn deref(&self) -> &Self::Target {
        &self.poset
    }
}
