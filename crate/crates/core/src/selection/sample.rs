use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::ParallelPair;
use crate::selection::filter::{filter_neutral, GenderedSelection, Limits};

/// Keeps at most `cap` selections per profession lemma, drawn uniformly
/// without replacement. Output is grouped by lemma in lexicographic order,
/// and keeps corpus order within a lemma.
///
/// # Panics
///
/// If `cap` is zero.
pub fn sample_per_profession(
    selections: Vec<GenderedSelection>,
    cap: usize,
    seed: u64,
) -> Vec<GenderedSelection> {
    assert!(cap >= 1, "per-profession cap must be at least 1");
    let mut groups: BTreeMap<String, Vec<GenderedSelection>> = BTreeMap::new();
    for sel in selections {
        groups
            .entry(sel.profession_lemma.clone())
            .or_default()
            .push(sel);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (_, group) in groups {
        if group.len() <= cap {
            out.extend(group);
            continue;
        }
        let mut keep = index::sample(&mut rng, group.len(), cap).into_vec();
        keep.sort_unstable();
        let mut group: Vec<Option<GenderedSelection>> = group.into_iter().map(Some).collect();
        out.extend(
            keep.into_iter()
                .map(|i| group[i].take().expect("indices are distinct")),
        );
    }
    out
}

/// Fixed-size uniform sample over a stream (Algorithm R). Items are
/// returned in stream order.
#[derive(Debug)]
pub struct Reservoir<T> {
    capacity: usize,
    seen: u64,
    items: Vec<(u64, T)>,
    rng: ChaCha8Rng,
}

impl<T> Reservoir<T> {
    pub fn new(capacity: usize, seed: u64) -> Self {
        Reservoir {
            capacity,
            seen: 0,
            items: Vec::with_capacity(capacity.min(1 << 16)),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn offer(&mut self, item: T) {
        let pos = self.seen;
        self.seen += 1;
        if self.items.len() < self.capacity {
            self.items.push((pos, item));
        } else if self.capacity > 0 {
            let j = self.rng.random_range(0..=pos);
            if (j as usize) < self.capacity {
                self.items[j as usize] = (pos, item);
            }
        }
    }

    /// Number of items offered so far.
    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn into_sorted(mut self) -> Vec<T> {
        self.items.sort_by_key(|(pos, _)| *pos);
        self.items.into_iter().map(|(_, item)| item).collect()
    }
}

/// Uniform sample of `n` pairs among those passing the neutral filter.
pub fn random_sample<I>(stream: I, n: usize, seed: u64, limits: &Limits) -> Vec<ParallelPair>
where
    I: IntoIterator<Item = ParallelPair>,
{
    let mut reservoir = Reservoir::new(n, seed);
    for pair in stream {
        if filter_neutral(&pair, limits).accepted() {
            reservoir.offer(pair);
        }
    }
    reservoir.into_sorted()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AnnotatedSentence, Origin};
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn sel(id: usize, lemma: &str) -> GenderedSelection {
        GenderedSelection {
            pair: ParallelPair::new(
                format!("L{id}"),
                AnnotatedSentence::unannotated(&format!("The {lemma} saw his friend {id}."), "en"),
                AnnotatedSentence::unannotated("x", "fr"),
                Origin::Original,
            ),
            pronoun_index: 4,
            profession_index: 2,
            profession_lemma: lemma.to_owned(),
        }
    }

    #[test]
    fn caps_each_profession() {
        let mut input: Vec<_> = (0..25).map(|i| sel(i, "developer")).collect();
        input.extend((25..28).map(|i| sel(i, "baker")));
        let out = sample_per_profession(input.clone(), 10, 7);
        assert_eq!(
            out.iter()
                .filter(|s| s.profession_lemma == "developer")
                .count(),
            10
        );
        assert_eq!(
            out.iter().filter(|s| s.profession_lemma == "baker").count(),
            3
        );
        // baker sorts first, corpus order inside each group
        assert_eq!(out[0].profession_lemma, "baker");
        let dev_ids: Vec<usize> = out[3..]
            .iter()
            .map(|s| s.pair.id[1..].parse().unwrap())
            .collect();
        assert!(dev_ids.windows(2).all(|w| w[0] < w[1]));

        assert_eq!(out, sample_per_profession(input, 10, 7));
    }

    #[test]
    fn reservoir_small_cases() {
        let pairs: Vec<_> = (0..5)
            .map(|i| {
                ParallelPair::from_raw(
                    format!("L{i}"),
                    "A sentence.",
                    "Une phrase.",
                    "fr",
                    Origin::Original,
                )
            })
            .collect();
        assert!(random_sample(pairs.clone(), 0, 1, &Limits::default()).is_empty());
        assert_eq!(
            random_sample(pairs.clone(), 50, 1, &Limits::default()).len(),
            5
        );
    }

    #[test]
    fn reservoir_is_reproducible() {
        let pairs: Vec<_> = (0..10_000)
            .map(|i| {
                ParallelPair::from_raw(
                    format!("L{i}"),
                    "A sentence.",
                    "Une phrase.",
                    "fr",
                    Origin::Original,
                )
            })
            .collect();
        let a = random_sample(pairs.clone(), 500, 42, &Limits::default());
        let b = random_sample(pairs.clone(), 500, 42, &Limits::default());
        let c = random_sample(pairs, 500, 43, &Limits::default());
        assert_eq!(a.len(), 500);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn reservoir_is_roughly_uniform() {
        // each of 100 items should be kept about 10% of the time
        let mut hits = [0u32; 100];
        for seed in 0..2000 {
            let mut r = Reservoir::new(10, seed);
            for i in 0..100 {
                r.offer(i);
            }
            for i in r.into_sorted() {
                hits[i] += 1;
            }
        }
        for h in hits {
            assert!((120..=290).contains(&h), "{h}");
        }
    }

    proptest! {
        #[test]
        fn never_exceeds_cap_or_duplicates(
            lemmas in proptest::collection::vec(0usize..6, 0..80),
            cap in 1usize..12,
            seed in any::<u64>(),
        ) {
            let input: Vec<_> = lemmas.iter().enumerate().map(|(i, l)| sel(i, &format!("prof{l}"))).collect();
            let out = sample_per_profession(input, cap, seed);
            let mut per: BTreeMap<&str, usize> = BTreeMap::new();
            for s in &out {
                *per.entry(&s.profession_lemma).or_default() += 1;
            }
            for (lemma, count) in per {
                let available = lemmas.iter().filter(|l| format!("prof{l}") == lemma).count();
                prop_assert_eq!(count, available.min(cap));
            }
            let ids: HashSet<&str> = out.iter().map(|s| s.pair.id.as_str()).collect();
            prop_assert_eq!(ids.len(), out.len());
        }
    }
}
