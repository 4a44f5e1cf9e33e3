//! Seeded synthetic corpora and citation graphs.
//!
//! These generators make every experiment command runnable without a real
//! dataset, and back the test and bench fixtures. Words are built from
//! consonant-vowel syllables (`kaba`, `dopu`, ...) that the stemmer leaves
//! unchanged, so planted token statistics survive preprocessing exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::citegraph::CitationGraph;
use crate::corpus::{Corpus, Judgment};

const CONSONANTS: [char; 12] = ['b', 'c', 'd', 'f', 'g', 'k', 'm', 'n', 'p', 'r', 't', 'v'];
const VOWELS: [char; 3] = ['a', 'o', 'u'];

/// The `index`-th word of a deterministic stemmer-stable pool. The index
/// is written out in base 36, one consonant-vowel syllable per digit, so
/// distinct indices give distinct words of any magnitude.
pub fn pool_word(index: usize) -> String {
    let mut word = String::new();
    let mut rest = index;
    loop {
        word.push(CONSONANTS[rest % CONSONANTS.len()]);
        rest /= CONSONANTS.len();
        word.push(VOWELS[rest % VOWELS.len()]);
        rest /= VOWELS.len();
        if rest == 0 {
            break;
        }
    }
    word
}

/// Options for [`random_corpus`].
#[derive(Debug, Clone)]
pub struct RandomCorpusOptions {
    pub num_docs: usize,
    pub vocab_size: usize,
    pub paragraphs_per_doc: std::ops::RangeInclusive<usize>,
    pub words_per_paragraph: std::ops::RangeInclusive<usize>,
}

impl Default for RandomCorpusOptions {
    fn default() -> Self {
        RandomCorpusOptions {
            num_docs: 50,
            vocab_size: 40,
            paragraphs_per_doc: 2..=6,
            words_per_paragraph: 4..=10,
        }
    }
}

/// A seeded random corpus over a small shared word pool, so paragraph
/// vocabularies overlap and cosines are informative.
pub fn random_corpus(seed: u64, options: &RandomCorpusOptions) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<String> = (0..options.vocab_size).map(pool_word).collect();
    let judgments = (0..options.num_docs).map(|doc| {
        let num_paragraphs = rng.gen_range(options.paragraphs_per_doc.clone());
        let paragraphs: Vec<String> = (0..num_paragraphs)
            .map(|_| {
                let num_words = rng.gen_range(options.words_per_paragraph.clone());
                let words: Vec<&str> = (0..num_words)
                    .map(|_| pool[rng.gen_range(0..pool.len())].as_str())
                    .collect();
                words.join(" ")
            })
            .collect();
        Judgment::new(format!("doc{doc:04}"), paragraphs).expect("generated paragraphs are valid")
    });
    Corpus::from_judgments(judgments).expect("generated ids are unique")
}

/// A seeded random simple graph over `num_nodes` ids (`n0000`, ...).
pub fn random_graph(seed: u64, num_nodes: usize, num_edges: usize) -> CitationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = CitationGraph::new();
    for i in 0..num_nodes {
        graph.add_node(format!("n{i:04}"));
    }
    let max_edges = num_nodes * (num_nodes.saturating_sub(1)) / 2;
    let target = num_edges.min(max_edges);
    let mut added = 0;
    while added < target {
        let a = rng.gen_range(0..num_nodes);
        let b = rng.gen_range(0..num_nodes);
        if a != b && graph.add_edge(format!("n{a:04}"), format!("n{b:04}")) {
            added += 1;
        }
    }
    graph
}

/// A corpus with topic structure plus a citation graph whose edges stay
/// inside topics.
#[derive(Debug, Clone)]
pub struct PlantedTopicData {
    pub corpus: Corpus,
    pub graph: CitationGraph,
}

/// Options for [`planted_topic_corpus`].
#[derive(Debug, Clone)]
pub struct PlantedTopicOptions {
    pub num_topics: usize,
    pub docs_per_topic: usize,
    /// Consecutive chain neighbours share `window - 1` of their `window`
    /// topic paragraphs; documents `window` or more hops apart share none.
    pub window: usize,
    pub words_per_paragraph: usize,
    /// Extra doc-unique paragraphs appended to every document.
    pub noise_paragraphs: usize,
}

impl Default for PlantedTopicOptions {
    fn default() -> Self {
        PlantedTopicOptions {
            num_topics: 10,
            docs_per_topic: 20,
            window: 3,
            words_per_paragraph: 8,
            noise_paragraphs: 2,
        }
    }
}

/// Builds one chain of documents per topic.
///
/// Topic `t` owns a pool of paragraphs; document `j` of the chain holds
/// pool paragraphs `j .. j + window` plus noise, and is linked to
/// document `j + 1`. Text similarity therefore decays with chain
/// distance, while every citation edge stays inside its topic.
pub fn planted_topic_corpus(seed: u64, options: &PlantedTopicOptions) -> PlantedTopicData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut judgments = Vec::new();
    let mut graph = CitationGraph::new();
    let mut noise_counter = 0usize;
    for topic in 0..options.num_topics {
        let pool_len = options.docs_per_topic + options.window;
        let pool: Vec<String> = (0..pool_len)
            .map(|p| {
                let words: Vec<String> = (0..options.words_per_paragraph)
                    .map(|w| {
                        // Topic-owned words keep pools of different topics
                        // disjoint.
                        pool_word(topic * 10_000 + p * options.words_per_paragraph + w)
                    })
                    .collect();
                words.join(" ")
            })
            .collect();
        for doc in 0..options.docs_per_topic {
            let mut paragraphs: Vec<String> = pool[doc..doc + options.window].to_vec();
            for _ in 0..options.noise_paragraphs {
                noise_counter += 1;
                let words: Vec<String> = (0..options.words_per_paragraph)
                    .map(|_| {
                        let unique = 1_000_000 + noise_counter * 100 + rng.gen_range(0..100);
                        pool_word(unique)
                    })
                    .collect();
                paragraphs.push(words.join(" "));
            }
            let id = format!("t{topic:02}d{doc:03}");
            judgments.push(Judgment::new(id.clone(), paragraphs).expect("valid paragraphs"));
            if doc > 0 {
                graph.add_edge(format!("t{topic:02}d{:03}", doc - 1), id);
            }
        }
    }
    PlantedTopicData {
        corpus: Corpus::from_judgments(judgments).expect("generated ids are unique"),
        graph,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textprep::porter;

    #[test]
    fn pool_words_are_distinct_and_stem_stable() {
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..5000 {
            let word = pool_word(i);
            assert!(seen.insert(word.clone()), "collision at {i}: {word}");
            assert_eq!(porter::stem(&word), word, "stemmer altered {word}");
        }
    }

    #[test]
    fn random_corpus_is_seed_deterministic() {
        let options = RandomCorpusOptions::default();
        assert_eq!(random_corpus(3, &options), random_corpus(3, &options));
        assert_ne!(random_corpus(3, &options), random_corpus(4, &options));
        assert_eq!(random_corpus(3, &options).len(), options.num_docs);
    }

    #[test]
    fn random_graph_respects_bounds() {
        let graph = random_graph(1, 10, 200);
        assert_eq!(graph.num_nodes(), 10);
        assert_eq!(graph.num_edges(), 45);
        let sparse = random_graph(1, 10, 5);
        assert_eq!(sparse.num_edges(), 5);
    }

    #[test]
    fn planted_topics_share_paragraphs_along_the_chain() {
        let data = planted_topic_corpus(9, &PlantedTopicOptions::default());
        assert_eq!(data.corpus.len(), 200);
        // edges only within topics, chain shape
        assert_eq!(data.graph.num_edges(), 10 * 19);
        let d0 = data.corpus.get("t00d000").unwrap();
        let d1 = data.corpus.get("t00d001").unwrap();
        let d5 = data.corpus.get("t00d005").unwrap();
        let shared = |a: &crate::corpus::Judgment, b: &crate::corpus::Judgment| {
            a.paragraphs()
                .iter()
                .filter(|p| b.paragraphs().contains(p))
                .count()
        };
        assert_eq!(shared(d0, d1), 2);
        assert_eq!(shared(d0, d5), 0);
        // cross-topic docs never connect
        assert_eq!(data.graph.sld("t00d000", "t01d000").unwrap(), None);
    }
}
