use serde::{Deserialize, Serialize};

use crate::par::Exec;

/// Guards on exponential searches. Exceeding one fails loudly with a cost
/// estimate instead of running.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Guards {
    /// Longest sequence searched by IP_r window certification.
    pub max_r: usize,
    /// Largest window for IP_r window certification.
    pub max_window: usize,
    pub max_avoid_len: usize,
    /// Candidates tried per position by the avoiding-sequence greedy search.
    pub avoid_budget: usize,
    pub max_j_len: usize,
    pub max_demo_len: usize,
    pub max_word_len: usize,
    pub max_sieve_limit: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_r: 8,
            max_window: 64,
            max_avoid_len: 20,
            avoid_budget: 5_000_000,
            max_j_len: 20,
            max_demo_len: 12,
            max_word_len: 16,
            max_sieve_limit: crate::sieve::DEFAULT_MAX_LIMIT,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SearchConfig {
    pub guards: Guards,
    pub exec: Exec,
}

impl SearchConfig {
    pub fn sequential() -> Self {
        SearchConfig {
            guards: Guards::default(),
            exec: Exec::Sequential,
        }
    }

    pub fn with_exec(exec: Exec) -> Self {
        SearchConfig {
            guards: Guards::default(),
            exec,
        }
    }
}
