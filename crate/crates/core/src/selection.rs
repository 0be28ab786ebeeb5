//! Selection samplers and the selection code.
//!
//! Both samplers scan the shared proposal sequence `Y_1, Y_2, ..` (drawn
//! from the marginal) and return an index `N` whose sample is distributed
//! exactly as `P_{Y|X=x}`. The code transmits `N` with the Elias delta code;
//! the decoder regenerates the same proposal sequence from `(seed,
//! substream)` and picks the `N`-th element.
//!
//! Wire contract per proposal step: the sampler first draws the proposal via
//! `marginal_sample`, then one auxiliary variate — a uniform for rejection
//! sampling, an Exp(1) gap for the Poisson-process sampler.

use crate::bits::{elias_delta_decode, elias_delta_encode, BitCursor, BitString, CodeError};
use crate::models::{Mechanism, ModelError};
use crate::stream::DeterministicStream;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SelectionError {
    /// The sampler touched `max_steps` proposals without a certified
    /// selection. Carries the best candidate seen for diagnostics (and for
    /// the opt-in approximate mode).
    #[error("budget of {max_steps} proposals exhausted; best candidate index {best_index}")]
    BudgetExhausted {
        max_steps: u64,
        best_index: u64,
        best_score: f64,
    },
    #[error("index {index} out of range 1..={horizon}")]
    IndexOutOfRange { index: usize, horizon: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Cap on the number of proposals a sampler may examine.
///
/// On exhaustion the default is a hard error; `approximate` instead returns
/// the best candidate examined so far, trading exactness for bounded
/// runtime. The output law then deviates from the target by an unreported
/// total-variation amount.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    max_steps: Option<u64>,
    approximate: bool,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self {
            max_steps: None,
            approximate: false,
        }
    }

    pub fn limited(max_steps: u64) -> Self {
        assert!(max_steps >= 1, "budget must allow at least one proposal");
        Self {
            max_steps: Some(max_steps),
            approximate: false,
        }
    }

    /// Return the running best instead of erroring when the cap is hit.
    pub fn with_approximation(mut self) -> Self {
        self.approximate = true;
        self
    }

    pub fn max_steps(&self) -> Option<u64> {
        self.max_steps
    }

    fn exceeded(&self, k: u64) -> bool {
        self.max_steps.is_some_and(|m| k > m)
    }
}

/// Result of a selection sampler run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionOutcome {
    /// Index `N` of the selected proposal, 1-based.
    pub selected_index: u64,
    /// Steps `K` the selection rule certified; `N <= K` always.
    pub steps_examined: u64,
    /// The selected proposal `Y_N`.
    pub sample: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionAlgo {
    Rejection,
    Pfr,
}

/// Running state of the Poisson-process scan: arrival time `T_k` is strictly
/// increasing, the bound `tau = min_j T_j / r(Y_j)` is non-increasing.
#[derive(Debug, Clone, Copy)]
pub struct PfrState {
    pub arrival_time: f64,
    pub bound: f64,
    pub best_index: u64,
    pub best_sample: f64,
}

impl PfrState {
    pub fn new() -> Self {
        Self {
            arrival_time: 0.0,
            bound: f64::INFINITY,
            best_index: 0,
            best_sample: f64::NAN,
        }
    }

    /// Advances the arrival time; gaps are strictly positive.
    pub fn advance(&mut self, gap: f64) {
        debug_assert!(gap > 0.0);
        self.arrival_time += gap;
    }

    /// Offers proposal `k`; first index attaining the minimum wins, so a
    /// later tie never displaces the incumbent.
    pub fn offer(&mut self, k: u64, sample: f64, ratio: f64) {
        let score = self.arrival_time / ratio;
        if score < self.bound {
            self.bound = score;
            self.best_index = k;
            self.best_sample = sample;
        }
    }
}

impl Default for PfrState {
    fn default() -> Self {
        Self::new()
    }
}

/// Plain rejection sampling against the marginal proposal.
///
/// Accepts proposal `k` when `U_k * ||r_x||_inf <= r_x(Y_k)`; the accepted
/// index is geometric with mean `||r_x||_inf` and the accepted sample has
/// law `P_{Y|X=x}` exactly.
pub fn rejection_select(
    mech: &dyn Mechanism,
    x: f64,
    stream: &mut DeterministicStream,
    budget: Budget,
) -> Result<SelectionOutcome, SelectionError> {
    let sup = mech.ratio_sup(x)?;
    // running argmin of u/r(y): the acceptance margin, kept for diagnostics
    // and for the approximate mode
    let mut best_index = 0u64;
    let mut best_sample = f64::NAN;
    let mut best_score = f64::INFINITY;
    let mut k = 0u64;
    loop {
        k += 1;
        if budget.exceeded(k) {
            let max_steps = budget.max_steps.unwrap();
            if budget.approximate && best_index > 0 {
                return Ok(SelectionOutcome {
                    selected_index: best_index,
                    steps_examined: max_steps,
                    sample: best_sample,
                });
            }
            return Err(SelectionError::BudgetExhausted {
                max_steps,
                best_index,
                best_score,
            });
        }
        let y = mech.marginal_sample(stream);
        let u = stream.next_uniform();
        let ratio = mech.density_ratio(x, y)?;
        if u * sup <= ratio {
            return Ok(SelectionOutcome {
                selected_index: k,
                steps_examined: k,
                sample: y,
            });
        }
        let score = u / ratio;
        if score < best_score {
            best_score = score;
            best_index = k;
            best_sample = y;
        }
    }
}

/// Poisson functional representation / global-bound A* sampling.
///
/// Scans proposals in ascending order of their implicit uniforms via
/// Poisson-process arrival times and returns the argmin of `T_j / r_x(Y_j)`.
/// The certified step count `K` is equal in distribution to the rejection
/// sampler's runtime, while the returned index `N <= K` is the rank the
/// accepted sample would have had among the examined uniforms.
pub fn pfr_select(
    mech: &dyn Mechanism,
    x: f64,
    stream: &mut DeterministicStream,
    budget: Budget,
) -> Result<SelectionOutcome, SelectionError> {
    let sup = mech.ratio_sup(x)?;
    let mut state = PfrState::new();
    let mut k = 0u64;
    loop {
        k += 1;
        if budget.exceeded(k) {
            let max_steps = budget.max_steps.unwrap();
            if budget.approximate && state.best_index > 0 {
                return Ok(SelectionOutcome {
                    selected_index: state.best_index,
                    steps_examined: max_steps,
                    sample: state.best_sample,
                });
            }
            return Err(SelectionError::BudgetExhausted {
                max_steps,
                best_index: state.best_index,
                best_score: state.bound,
            });
        }
        let y = mech.marginal_sample(stream);
        let gap = stream.next_exponential();
        state.advance(gap);
        if state.bound < state.arrival_time / sup {
            return Ok(SelectionOutcome {
                selected_index: state.best_index,
                steps_examined: k - 1,
                sample: state.best_sample,
            });
        }
        let ratio = mech.density_ratio(x, y)?;
        state.offer(k, y, ratio);
    }
}

/// Rank of `U_k` among the first `horizon` uniforms (1-based throughout):
/// `|{ i <= horizon : U_i <= U_k }|`.
pub fn sort_index(
    uniforms: &[f64],
    k: usize,
    horizon: usize,
) -> Result<u64, SelectionError> {
    if k < 1 || k > horizon || horizon > uniforms.len() {
        return Err(SelectionError::IndexOutOfRange { index: k, horizon });
    }
    let pivot = uniforms[k - 1];
    Ok(uniforms[..horizon].iter().filter(|&&u| u <= pivot).count() as u64)
}

fn run_sampler(
    mech: &dyn Mechanism,
    x: f64,
    stream: &mut DeterministicStream,
    algo: SelectionAlgo,
    budget: Budget,
) -> Result<SelectionOutcome, SelectionError> {
    match algo {
        SelectionAlgo::Rejection => rejection_select(mech, x, stream, budget),
        SelectionAlgo::Pfr => pfr_select(mech, x, stream, budget),
    }
}

/// Encodes one record: runs the chosen sampler on the substream and emits
/// the Elias delta codeword of the selected index.
pub fn selection_encode(
    mech: &dyn Mechanism,
    x: f64,
    seed: u64,
    substream: u64,
    algo: SelectionAlgo,
    budget: Budget,
) -> Result<BitString, SelectionError> {
    let mut stream = DeterministicStream::new(seed, substream);
    let outcome = run_sampler(mech, x, &mut stream, algo, budget)?;
    Ok(elias_delta_encode(outcome.selected_index)?)
}

/// Decodes one record: reads the index and replays the shared proposal
/// sequence up to it.
///
/// A seed or substream mismatch is undetectable by construction: the decode
/// succeeds and silently yields a sample from the marginal instead of the
/// conditional.
pub fn selection_decode(
    mech: &dyn Mechanism,
    bits: &BitString,
    cursor: &mut BitCursor,
    seed: u64,
    substream: u64,
    algo: SelectionAlgo,
) -> Result<f64, SelectionError> {
    let n = elias_delta_decode(bits, cursor)?;
    let mut stream = DeterministicStream::new(seed, substream);
    let mut y = f64::NAN;
    for _ in 0..n {
        y = mech.marginal_sample(&mut stream);
        match algo {
            SelectionAlgo::Rejection => {
                stream.next_uniform();
            }
            SelectionAlgo::Pfr => {
                stream.next_exponential();
            }
        }
    }
    Ok(y)
}
