//! Seeded synthetic corpora for benchmarks, examples and tests.
//!
//! Papers are drawn from a fixed set of research areas. Each area has its
//! own vocabulary and keyword phrases, and abstracts mix area terms with a
//! shared pool of generic academic words, so lexical retrieval has to
//! separate signal from filler. Venue shares follow a small conference
//! survey: 148 of 292 papers at ten major venues, the rest elsewhere.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{PaperRecord, Source};
use crate::pipeline::normalize_title;

/// Venue counts of the reference sample (292 papers).
pub const VENUE_COUNTS: [(&str, usize); 11] = [
    ("ICLR", 12),
    ("NeurIPS", 39),
    ("ICML", 13),
    ("CVPR", 13),
    ("IROS", 25),
    ("ICRA", 25),
    ("AAAI", 5),
    ("ACL", 5),
    ("ICCV", 7),
    ("EMNLP", 4),
    ("Other", 144),
];

pub const REFERENCE_SIZE: usize = 292;

const OTHER_VENUES: &[&str] = &[
    "Journal of Machine Learning Research",
    "IEEE Transactions on Pattern Analysis and Machine Intelligence",
    "Robotics and Autonomous Systems",
    "International Journal of Computer Vision",
    "SIGIR",
    "KDD",
    "Transactions on Machine Learning Research",
    "",
];

struct Area {
    terms: &'static [&'static str],
    keywords: &'static [&'static str],
}

const AREAS: &[Area] = &[
    Area {
        terms: &[
            "retrieval",
            "ranking",
            "query",
            "lexical",
            "sparse",
            "index",
            "passage",
            "reranker",
            "bm25",
            "relevance",
            "search",
            "document",
        ],
        keywords: &[
            "information retrieval",
            "dense passage retrieval",
            "learning to rank",
            "query expansion",
        ],
    },
    Area {
        terms: &[
            "graph",
            "node",
            "message",
            "passing",
            "molecular",
            "edge",
            "relational",
            "spectral",
            "topology",
            "subgraph",
            "link",
            "embedding",
        ],
        keywords: &[
            "graph neural networks",
            "link prediction",
            "molecular property prediction",
            "spectral methods",
        ],
    },
    Area {
        terms: &[
            "policy",
            "reward",
            "agent",
            "exploration",
            "value",
            "offline",
            "actor",
            "critic",
            "trajectory",
            "planning",
            "markov",
            "bandit",
        ],
        keywords: &[
            "reinforcement learning",
            "offline reinforcement learning",
            "multi-agent systems",
            "model-based planning",
        ],
    },
    Area {
        terms: &[
            "diffusion",
            "denoising",
            "generative",
            "image",
            "synthesis",
            "score",
            "latent",
            "sampling",
            "guidance",
            "pixel",
            "texture",
            "style",
        ],
        keywords: &[
            "diffusion models",
            "image synthesis",
            "generative modeling",
            "latent variable models",
        ],
    },
    Area {
        terms: &[
            "language",
            "transformer",
            "token",
            "pretraining",
            "instruction",
            "prompt",
            "decoder",
            "translation",
            "dialogue",
            "summarization",
            "reasoning",
            "corpus",
        ],
        keywords: &[
            "large language models",
            "machine translation",
            "instruction tuning",
            "chain of thought reasoning",
        ],
    },
    Area {
        terms: &[
            "grasping",
            "manipulation",
            "robot",
            "gripper",
            "tactile",
            "dexterous",
            "arm",
            "contact",
            "pose",
            "object",
            "assembly",
            "force",
        ],
        keywords: &[
            "robotic manipulation",
            "dexterous grasping",
            "tactile sensing",
            "pose estimation",
        ],
    },
    Area {
        terms: &[
            "navigation",
            "slam",
            "lidar",
            "odometry",
            "mapping",
            "localization",
            "terrain",
            "legged",
            "locomotion",
            "drone",
            "quadruped",
            "obstacle",
        ],
        keywords: &[
            "visual odometry",
            "legged locomotion",
            "simultaneous localization and mapping",
            "autonomous navigation",
        ],
    },
    Area {
        terms: &[
            "segmentation",
            "detection",
            "convolutional",
            "backbone",
            "bounding",
            "instance",
            "panoptic",
            "mask",
            "anchor",
            "feature",
            "pyramid",
            "scene",
        ],
        keywords: &[
            "object detection",
            "semantic segmentation",
            "scene understanding",
            "vision transformers",
        ],
    },
    Area {
        terms: &[
            "pruning",
            "quantization",
            "distillation",
            "compression",
            "sparsity",
            "latency",
            "hardware",
            "efficient",
            "student",
            "teacher",
            "bitwidth",
            "accelerator",
        ],
        keywords: &[
            "knowledge distillation",
            "model compression",
            "neural network pruning",
            "efficient inference",
        ],
    },
    Area {
        terms: &[
            "federated",
            "privacy",
            "differential",
            "client",
            "aggregation",
            "heterogeneous",
            "communication",
            "secure",
            "attack",
            "poisoning",
            "byzantine",
            "personalization",
        ],
        keywords: &[
            "federated learning",
            "differential privacy",
            "adversarial robustness",
            "secure aggregation",
        ],
    },
    Area {
        terms: &[
            "causal",
            "counterfactual",
            "intervention",
            "confounding",
            "treatment",
            "effect",
            "structural",
            "discovery",
            "instrumental",
            "identifiability",
            "observational",
            "estimand",
        ],
        keywords: &[
            "causal inference",
            "causal discovery",
            "treatment effect estimation",
            "counterfactual reasoning",
        ],
    },
    Area {
        terms: &[
            "clinical",
            "medical",
            "patient",
            "radiology",
            "diagnosis",
            "health",
            "ehr",
            "mri",
            "pathology",
            "survival",
            "drug",
            "genomic",
        ],
        keywords: &[
            "medical imaging",
            "clinical prediction",
            "drug discovery",
            "electronic health records",
        ],
    },
    Area {
        terms: &[
            "speech",
            "audio",
            "acoustic",
            "speaker",
            "waveform",
            "spectrogram",
            "recognition",
            "music",
            "phoneme",
            "vocoder",
            "prosody",
            "asr",
        ],
        keywords: &[
            "speech recognition",
            "speaker verification",
            "audio generation",
            "music information retrieval",
        ],
    },
    Area {
        terms: &[
            "bayesian",
            "variational",
            "posterior",
            "uncertainty",
            "gaussian",
            "process",
            "kernel",
            "inference",
            "calibration",
            "ensemble",
            "prior",
            "likelihood",
        ],
        keywords: &[
            "bayesian deep learning",
            "uncertainty quantification",
            "gaussian processes",
            "variational inference",
        ],
    },
    Area {
        terms: &[
            "video",
            "temporal",
            "action",
            "tracking",
            "motion",
            "optical",
            "flow",
            "frame",
            "spatiotemporal",
            "recognition",
            "clip",
            "egocentric",
        ],
        keywords: &[
            "video understanding",
            "action recognition",
            "multi-object tracking",
            "optical flow estimation",
        ],
    },
];

const MODIFIERS: &[&str] = &[
    "robust",
    "efficient",
    "adaptive",
    "hierarchical",
    "contrastive",
    "scalable",
    "self-supervised",
    "multi-scale",
    "probabilistic",
    "neural",
    "sparse",
    "unified",
    "implicit",
    "interpretable",
    "generalizable",
    "lightweight",
];

const GENERIC: &[&str] = &[
    "method",
    "approach",
    "results",
    "performance",
    "experiments",
    "benchmark",
    "framework",
    "propose",
    "model",
    "data",
    "training",
    "baseline",
    "accuracy",
    "analysis",
    "improves",
    "demonstrate",
    "existing",
    "novel",
    "evaluation",
    "state",
    "art",
    "task",
    "tasks",
    "learning",
    "network",
    "networks",
    "problem",
    "setting",
    "datasets",
    "significant",
    "challenging",
    "work",
    "recent",
    "study",
    "paper",
    "applications",
];

const FIRST_NAMES: &[&str] = &[
    "Ada", "Bo", "Chen", "Dana", "Elif", "Farid", "Grace", "Hiro", "Ines", "Jonas", "Kemal", "Lena", "Mateo", "Nadia",
    "Omar", "Priya", "Quinn", "Rosa", "Sven", "Tariq", "Uma", "Viktor", "Wen", "Yara", "Zoltan",
];

const LAST_NAMES: &[&str] = &[
    "Smith",
    "Müller",
    "Tanaka",
    "García",
    "Okafor",
    "Ivanova",
    "Nguyen",
    "Rossi",
    "Kowalski",
    "Haddad",
    "Larsen",
    "Zhang",
    "Fernandes",
    "Novak",
    "Sato",
    "Dubois",
    "Andersson",
    "Kim",
    "Patel",
    "Moreau",
];

const TITLE_PATTERNS: &[&str] = &[
    "{m} {a} {b} for {c} {d}",
    "Towards {m} {a} {b}",
    "{A} {b}: {m} {c} with {d}",
    "Learning {m} {a} via {b} {c}",
    "On the {a} of {m} {b} {c}",
    "{M} {a} {b} under {c}",
    "Rethinking {a} {b} for {m} {c}",
    "{M} {a} and {b} {c} at scale",
];

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn pick<'a, R: Rng>(rng: &mut R, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).copied().unwrap_or("")
}

fn make_title<R: Rng>(rng: &mut R, area: &Area) -> String {
    let mut terms: Vec<&str> = area.terms.to_vec();
    terms.shuffle(rng);
    let m = pick(rng, MODIFIERS);
    let pattern = pick(rng, TITLE_PATTERNS);
    let title = pattern
        .replace("{m}", m)
        .replace("{M}", &capitalize(m))
        .replace("{A}", &capitalize(terms[0]))
        .replace("{a}", terms[0])
        .replace("{b}", terms[1])
        .replace("{c}", terms[2])
        .replace("{d}", terms[3]);
    capitalize(&title)
}

fn make_abstract<R: Rng>(rng: &mut R, area: &Area, title: &str) -> String {
    let title_words: Vec<String> = title
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| w.len() > 3)
        .map(str::to_lowercase)
        .collect();
    let sentences = rng.gen_range(3..=5);
    let mut out = Vec::new();
    for s in 0..sentences {
        let len = rng.gen_range(10..=18);
        let mut words: Vec<String> = Vec::with_capacity(len);
        for _ in 0..len {
            let roll: f64 = rng.gen();
            let w = if roll < 0.35 {
                pick(rng, area.terms).to_string()
            } else if roll < 0.45 && !title_words.is_empty() {
                title_words[rng.gen_range(0..title_words.len())].clone()
            } else if roll < 0.5 {
                // occasional borrowing from another area keeps topics overlapping
                let other = &AREAS[rng.gen_range(0..AREAS.len())];
                pick(rng, other.terms).to_string()
            } else {
                pick(rng, GENERIC).to_string()
            };
            words.push(w);
        }
        if s == 0 {
            words.insert(0, "we".into());
        }
        let mut sentence = capitalize(&words.join(" "));
        sentence.push('.');
        out.push(sentence);
    }
    out.join(" ")
}

fn author_name<R: Rng>(rng: &mut R) -> String {
    format!("{} {}", pick(rng, FIRST_NAMES), pick(rng, LAST_NAMES))
}

fn venue_for<R: Rng>(rng: &mut R, slot: &str) -> String {
    if slot == "Other" {
        pick(rng, OTHER_VENUES).to_string()
    } else {
        slot.to_string()
    }
}

fn make_paper<R: Rng>(rng: &mut R, index: usize, venue_slot: &str, seen: &mut HashSet<String>) -> PaperRecord {
    let area = &AREAS[rng.gen_range(0..AREAS.len())];
    let mut title = make_title(rng, area);
    while !seen.insert(normalize_title(&title)) {
        title = make_title(rng, area);
    }
    let mut p = PaperRecord::new(format!("syn-{index:04}"), title);
    p.abstract_text = make_abstract(rng, area, &p.title);
    let n_authors = rng.gen_range(1..=5);
    p.authors = (0..n_authors).map(|_| author_name(rng)).collect();
    p.authors.dedup();
    p.venue = venue_for(rng, venue_slot);
    p.year = Some(rng.gen_range(2015..=2024));
    let mut kws: Vec<&str> = area.keywords.to_vec();
    kws.shuffle(rng);
    p.keywords = kws[..rng.gen_range(1..=3)].iter().map(|s| s.to_string()).collect();
    if rng.gen_bool(0.9) {
        // heavy tail: most papers modestly cited, a few very highly
        p.citations = Some((rng.gen::<f64>().powi(4) * 3000.0) as u64);
    }
    if rng.gen_bool(0.7) {
        p.doi = Some(format!("10.5555/synth.{index:04}"));
    }
    p.url = Some(format!("https://papers.example.org/{}", p.id));
    if rng.gen_bool(0.6) {
        p.pdf_url = Some(format!("https://papers.example.org/{}.pdf", p.id));
    }
    p.source = Source::Offline;
    p
}

/// `n` papers with venues sampled in reference proportions.
pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<PaperRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    (0..n)
        .map(|i| {
            let mut ticket = rng.gen_range(0..REFERENCE_SIZE);
            let slot = VENUE_COUNTS
                .iter()
                .find(|(_, c)| {
                    if ticket < *c {
                        true
                    } else {
                        ticket -= c;
                        false
                    }
                })
                .map_or("Other", |(v, _)| *v);
            make_paper(&mut rng, i, slot, &mut seen)
        })
        .collect()
}

/// Exactly [`REFERENCE_SIZE`] papers with venue counts equal to
/// [`VENUE_COUNTS`], in shuffled order.
pub fn reference_corpus(seed: u64) -> Vec<PaperRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<&str> = VENUE_COUNTS
        .iter()
        .flat_map(|(v, c)| std::iter::repeat_n(*v, *c))
        .collect();
    slots.shuffle(&mut rng);
    let mut seen = HashSet::new();
    slots
        .into_iter()
        .enumerate()
        .map(|(i, slot)| make_paper(&mut rng, i, slot, &mut seen))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_counts_hold() {
        let c = reference_corpus(3);
        assert_eq!(c.len(), REFERENCE_SIZE);
        for (venue, count) in VENUE_COUNTS.iter().filter(|(v, _)| *v != "Other") {
            assert_eq!(c.iter().filter(|p| p.venue == *venue).count(), *count, "{venue}");
        }
        assert_eq!(VENUE_COUNTS.iter().map(|(_, c)| c).sum::<usize>(), REFERENCE_SIZE);
    }

    #[test]
    fn seeded_and_unique() {
        let a = synthetic_corpus(120, 9);
        assert_eq!(a, synthetic_corpus(120, 9));
        assert_ne!(a, synthetic_corpus(120, 10));
        let titles: HashSet<String> = a.iter().map(|p| normalize_title(&p.title)).collect();
        assert_eq!(titles.len(), a.len());
    }
}
