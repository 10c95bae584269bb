use rayon::prelude::*;
use serde::Serialize;

use crate::events::{LetterSet, SimpleWord};
use crate::linalg::QMatrix;
use crate::series::SimpleSeries;
use crate::word::words_up_to;

use super::RealizeError;

/// Values of a series on `prefix · suffix` for all prefixes and suffixes up to
/// the given lengths, both listed in length-lex order.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelBlock {
    pub prefixes: Vec<SimpleWord>,
    pub suffixes: Vec<SimpleWord>,
    pub matrix: QMatrix,
}

pub fn hankel(p: &SimpleSeries, max_prefix: usize, max_suffix: usize) -> Result<HankelBlock, RealizeError> {
    if max_prefix + max_suffix > p.truncation() {
        return Err(RealizeError::HorizonTooShort {
            needed: max_prefix + max_suffix,
            truncation: p.truncation(),
        });
    }
    let letters = p.space().letters();
    let prefixes = words_up_to(letters, max_prefix);
    let suffixes = words_up_to(letters, max_suffix);
    let rows: Vec<_> = prefixes
        .par_iter()
        .map(|u| suffixes.iter().map(|v| p.coeff(&u.concat(v))).collect())
        .collect();
    Ok(HankelBlock {
        prefixes,
        suffixes,
        matrix: QMatrix::from_rows(rows),
    })
}

pub fn hankel_rank(b: &HankelBlock) -> usize {
    b.matrix.rank()
}

/// Rank at one size and at the next size down, with the stabilization flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankStep {
    pub size: [usize; 2],
    pub rank: usize,
    pub previous_rank: Option<usize>,
    pub stabilized: bool,
}

impl RankStep {
    pub(crate) fn new(size: [usize; 2], rank: usize, previous_rank: Option<usize>) -> Self {
        Self {
            size,
            rank,
            previous_rank,
            stabilized: previous_rank == Some(rank),
        }
    }
}

/// Hankel rank at `(m, s)` compared against `(m − 1, s − 1)`.
pub fn hankel_step(p: &SimpleSeries, max_prefix: usize, max_suffix: usize) -> Result<RankStep, RealizeError> {
    let rank = hankel_rank(&hankel(p, max_prefix, max_suffix)?);
    let previous = if max_prefix > 0 && max_suffix > 0 {
        Some(hankel_rank(&hankel(p, max_prefix - 1, max_suffix - 1)?))
    } else {
        None
    };
    Ok(RankStep::new([max_prefix, max_suffix], rank, previous))
}
