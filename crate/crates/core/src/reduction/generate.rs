use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ReductionError;
use crate::satsm::{rule1_holds, SatSmInstance};

/// Attempts made before [`generate_random_satsm`] gives up.
pub const GENERATION_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    /// `|X|`.
    pub universe: usize,
    /// Number of lists `n`.
    pub lists: usize,
    pub seed: u64,
}

/// A random valid SAT-SM instance, deterministic per seed.
///
/// Values are laid down in a random topological order. Each one is appended
/// to two distinct lists chosen among those that keep Rule 1 intact and
/// leave enough values to bring every list to length 2; an attempt that
/// runs out of choices is discarded. Values are relabelled at random at the
/// end, which preserves validity.
pub fn generate_random_satsm(params: GeneratorParams) -> Result<SatSmInstance, ReductionError> {
    let GeneratorParams {
        universe: x,
        lists: n,
        seed,
    } = params;
    if n < 2 || x < n {
        return Err(ReductionError::InfeasibleParameters(format!(
            "need 2 <= n <= |X| so that every list has 2 entries and every value 2 lists (|X| = {x}, n = {n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERATION_BUDGET {
        if let Some(inst) = attempt(x, n, &mut rng) {
            debug_assert!(inst.is_valid(), "{}", inst.validate());
            return Ok(inst);
        }
    }
    Err(ReductionError::GenerationFailed {
        universe: x,
        lists: n,
        attempts: GENERATION_BUDGET,
    })
}

/// Largest `|X|` for which valid instances with `n` lists are known to
/// exist, indexed by `n`. Up to `|X| = 7` this comes from exhaustive search;
/// beyond that it is where the generator has been observed to succeed.
const KNOWN_MAX_UNIVERSE: [usize; 9] = [0, 0, 0, 0, 4, 6, 9, 12, 12];

/// Draws feasible generator parameters (`4 <= n <= 8`, `n <= |X| <= max_x`)
/// from `seed`, or `None` if `max_x < 4`.
pub fn sample_params(seed: u64, max_x: usize) -> Option<GeneratorParams> {
    let choices: Vec<(usize, usize)> = (4..KNOWN_MAX_UNIVERSE.len())
        .flat_map(|n| (n..=KNOWN_MAX_UNIVERSE[n].min(max_x)).map(move |x| (x, n)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5a75);
    let &(universe, lists) = choices.choose(&mut rng)?;
    Some(GeneratorParams {
        universe,
        lists,
        seed,
    })
}

fn attempt(x: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<SatSmInstance> {
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 1..=x {
        let remaining = x - e;
        let mut candidates = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let deficit = |i: usize| {
                    let len = lists[i].len() + usize::from(i == a || i == b);
                    2usize.saturating_sub(len)
                };
                let total: usize = (0..n).map(deficit).sum();
                if total > 2 * remaining || (0..n).any(|i| deficit(i) > remaining) {
                    continue;
                }
                let mut trial = lists.clone();
                trial[a].push(e);
                trial[b].push(e);
                if rule1_holds(&SatSmInstance::new(e, trial)) {
                    candidates.push((a, b));
                }
            }
        }
        let &(a, b) = candidates.choose(rng)?;
        lists[a].push(e);
        lists[b].push(e);
    }
    let mut relabel: Vec<usize> = (1..=x).collect();
    relabel.shuffle(rng);
    for list in &mut lists {
        for e in list.iter_mut() {
            *e = relabel[*e - 1];
        }
    }
    lists.shuffle(rng);
    let inst = SatSmInstance::new(x, lists);
    inst.is_valid().then_some(inst)
}
