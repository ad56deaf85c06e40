//! Fixed-capacity FIFO experience memory with uniform sampling.

use rand::Rng as _;

use crate::{Error, Result, Rng};

/// Default replay capacity.
pub const DEFAULT_CAPACITY: usize = 1_000_000;

/// One transition `⟨s, a, r, s′⟩` plus how the episode ended at `s′`.
///
/// `done` marks a genuine terminal state; `timed_out` marks an episode cut
/// by the step limit, which still bootstraps. They are never both set.
#[derive(Debug, Clone, PartialEq)]
pub struct Experience {
    pub state: Vec<f64>,
    pub action: usize,
    pub reward: f64,
    pub next_state: Vec<f64>,
    pub done: bool,
    pub timed_out: bool,
}

impl Experience {
    /// Validating constructor.
    pub fn new(
        state: Vec<f64>,
        action: usize,
        reward: f64,
        next_state: Vec<f64>,
        done: bool,
        timed_out: bool,
    ) -> Result<Self> {
        let exp = Self {
            state,
            action,
            reward,
            next_state,
            done,
            timed_out,
        };
        exp.validate()?;
        Ok(exp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.done && self.timed_out {
            return Err(Error::InvalidInput(
                "experience cannot be both terminal and timed out".into(),
            ));
        }
        let finite = self.reward.is_finite()
            && self.state.iter().all(|x| x.is_finite())
            && self.next_state.iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::NonFinite("experience"));
        }
        Ok(())
    }
}

/// Ring buffer of [`Experience`]; once full, every push evicts the oldest entry.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    storage: Vec<Experience>,
    /// Slot the next push writes to once the buffer is full.
    head: usize,
    insert_count: u64,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParameter(
                "replay capacity must be ≥ 1".into(),
            ));
        }
        Ok(Self {
            capacity,
            storage: Vec::with_capacity(capacity.min(1 << 16)),
            head: 0,
            insert_count: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.storage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.storage.is_empty()
    }

    /// Total pushes since creation, including evicted ones.
    pub fn insert_count(&self) -> u64 {
        self.insert_count
    }

    pub fn push(&mut self, exp: Experience) {
        debug_assert!(exp.validate().is_ok(), "invalid experience pushed");
        if self.storage.len() < self.capacity {
            self.storage.push(exp);
        } else {
            self.storage[self.head] = exp;
            self.head = (self.head + 1) % self.capacity;
        }
        self.insert_count += 1;
    }

    /// Element `i` in insertion order, 0 being the oldest retained.
    pub fn get(&self, i: usize) -> Option<&Experience> {
        if i >= self.storage.len() {
            return None;
        }
        let slot = if self.storage.len() < self.capacity {
            i
        } else {
            (self.head + i) % self.capacity
        };
        self.storage.get(slot)
    }

    /// Oldest to newest.
    pub fn iter(&self) -> impl Iterator<Item = &Experience> {
        (0..self.len()).map(move |i| self.get(i).expect("index in range"))
    }

    /// Draws `batch_size` storage indices uniformly with replacement.
    pub fn sample_indices(&self, batch_size: usize, rng: &mut Rng) -> Result<Vec<usize>> {
        if batch_size == 0 {
            return Err(Error::InvalidParameter("batch size must be ≥ 1".into()));
        }
        if self.len() < batch_size {
            return Err(Error::InsufficientData {
                needed: batch_size,
                available: self.len(),
            });
        }
        let n = self.len();
        Ok((0..batch_size).map(|_| rng.random_range(0..n)).collect())
    }

    /// Uniform batch drawn with replacement; the buffer is not modified.
    pub fn sample(&self, batch_size: usize, rng: &mut Rng) -> Result<Vec<&Experience>> {
        Ok(self
            .sample_indices(batch_size, rng)?
            .into_iter()
            .map(|i| &self.storage[i])
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    fn exp(tag: f64) -> Experience {
        Experience::new(vec![tag], 0, tag, vec![tag + 1.0], false, false).unwrap()
    }

    fn tags(buf: &ReplayBuffer) -> Vec<f64> {
        buf.iter().map(|e| e.reward).collect()
    }

    #[test]
    fn fifo_eviction() {
        let mut buf = ReplayBuffer::new(2).unwrap();
        assert_eq!(buf.len(), 0);
        buf.push(exp(1.0));
        assert_eq!(buf.len(), 1);
        buf.push(exp(2.0));
        buf.push(exp(3.0));
        assert_eq!(tags(&buf), vec![2.0, 3.0]);
        assert_eq!(buf.insert_count(), 3);
    }

    #[test]
    fn long_run_matches_list_oracle() {
        let mut buf = ReplayBuffer::new(1000).unwrap();
        let mut oracle: Vec<f64> = Vec::new();
        for i in 0..10_000 {
            buf.push(exp(i as f64));
            oracle.push(i as f64);
            if oracle.len() > 1000 {
                oracle.remove(0);
            }
            if i == 499 {
                assert_eq!(buf.len(), 500);
            }
        }
        assert_eq!(buf.len(), 1000);
        assert_eq!(tags(&buf), oracle);
    }

    #[test]
    fn len_saturates_at_capacity() {
        let mut buf = ReplayBuffer::new(7).unwrap();
        for i in 0..12 {
            buf.push(exp(i as f64));
        }
        assert_eq!(buf.len(), 7);
    }

    #[test]
    fn sample_single_and_insufficient() {
        let mut buf = ReplayBuffer::new(4).unwrap();
        let mut rng = seeded_rng(0);
        assert!(matches!(
            buf.sample(1, &mut rng),
            Err(Error::InsufficientData {
                needed: 1,
                available: 0
            })
        ));
        buf.push(exp(5.0));
        let batch = buf.sample(1, &mut rng).unwrap();
        assert_eq!(batch[0].reward, 5.0);
        assert!(buf.sample(2, &mut rng).is_err());
        assert!(buf.sample(0, &mut rng).is_err());
    }

    #[test]
    fn sample_is_deterministic_and_pure() {
        let mut buf = ReplayBuffer::new(50).unwrap();
        for i in 0..80 {
            buf.push(exp(i as f64));
        }
        let before = tags(&buf);
        let a: Vec<f64> = buf
            .sample(16, &mut seeded_rng(42))
            .unwrap()
            .iter()
            .map(|e| e.reward)
            .collect();
        let b: Vec<f64> = buf
            .sample(16, &mut seeded_rng(42))
            .unwrap()
            .iter()
            .map(|e| e.reward)
            .collect();
        assert_eq!(a, b);
        assert_eq!(tags(&buf), before);
    }

    #[test]
    fn experience_invariants() {
        assert!(Experience::new(vec![0.0], 0, 0.0, vec![0.0], true, true).is_err());
        assert!(Experience::new(vec![f64::NAN], 0, 0.0, vec![0.0], false, false).is_err());
        assert!(Experience::new(vec![0.0], 0, f64::INFINITY, vec![0.0], false, false).is_err());
        assert!(ReplayBuffer::new(0).is_err());
    }
}
