//! Seeded synthetic graphs conforming to the domain schemas.
//!
//! Generation is fully deterministic for a fixed (domain, sizes, seed):
//! node ids, feature texts, and adjacency draws all come from one ChaCha
//! stream, and every mirrored edge keeps the declared reciprocity intact.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{FeatureValue, Graph, GraphManifest, Node, NodeId, ReciprocityRule};

use super::schema::{domain_schema, DegreeDist, Domain, FeatureGen, Pool};
use super::BenchError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    pub graph_id: String,
    pub domain: Domain,
    /// Node count per node type; omitted types fall back to their schema
    /// minimum.
    pub sizes: BTreeMap<String, usize>,
    pub seed: u64,
}

impl SynthConfig {
    /// Distribute roughly `total_nodes` across the domain's node types by
    /// their schema weights.
    pub fn sized(domain: Domain, total_nodes: usize, seed: u64) -> Self {
        let schema = domain_schema(domain);
        let sizes = schema
            .node_types
            .iter()
            .map(|t| {
                let count = ((total_nodes as f64) * t.weight).round() as usize;
                (t.name.to_string(), count.max(t.min_count))
            })
            .collect();
        SynthConfig {
            graph_id: format!("{domain}-{total_nodes}-s{seed}"),
            domain,
            sizes,
            seed,
        }
    }

    pub fn with_graph_id(mut self, graph_id: impl Into<String>) -> Self {
        self.graph_id = graph_id.into();
        self
    }
}

/// Generate a graph obeying the domain schema's node types, edges, and
/// reciprocity. Identical configs yield byte-identical serializations.
pub fn generate_synthetic_graph(cfg: &SynthConfig) -> Result<Graph, BenchError> {
    let schema = domain_schema(cfg.domain);
    for node_type in cfg.sizes.keys() {
        if !schema.node_types.iter().any(|t| t.name == node_type.as_str()) {
            return Err(BenchError::UnknownNodeType {
                domain: cfg.domain.to_string(),
                node_type: node_type.clone(),
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut factory = ValueFactory::new();

    // ids first, so edge generation can sample over complete target lists
    let mut ids_by_type: BTreeMap<&str, Vec<NodeId>> = BTreeMap::new();
    for spec in schema.node_types {
        let count = cfg.sizes.get(spec.name).copied().unwrap_or(spec.min_count);
        let ids = (0..count)
            .map(|i| NodeId::new(format!("{}-{i:05}", spec.name)).expect("generated id is valid"))
            .collect();
        ids_by_type.insert(spec.name, ids);
    }

    // per-type edge keys, present (possibly empty) on every node
    let mut edges_of_type: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for edge in schema.edges {
        edges_of_type.entry(edge.src).or_default().insert(edge.edge);
        edges_of_type.entry(edge.dst).or_default().insert(edge.reverse);
    }

    let mut nodes: BTreeMap<NodeId, Node> = BTreeMap::new();
    for spec in schema.node_types {
        let count = ids_by_type[spec.name].len();
        for id in ids_by_type[spec.name].clone() {
            let mut features = BTreeMap::new();
            for feature in spec.features {
                let value = factory.synthesize(spec.name, feature.name, feature.gen, count, &mut rng);
                features.insert(feature.name.to_string(), value);
            }
            let neighbors = edges_of_type
                .get(spec.name)
                .map(|keys| keys.iter().map(|k| (k.to_string(), Vec::new())).collect())
                .unwrap_or_default();
            nodes.insert(
                id.clone(),
                Node { id, node_type: spec.name.to_string(), features, neighbors },
            );
        }
    }

    for edge in schema.edges {
        let sources = ids_by_type[edge.src].clone();
        let targets = &ids_by_type[edge.dst];
        let same_type = edge.src == edge.dst;
        let available = if same_type { targets.len().saturating_sub(1) } else { targets.len() };
        if available == 0 {
            continue;
        }
        let sampler = DegreeSampler::new(edge.degree, available);
        for src in &sources {
            let wanted = sampler.draw(&mut rng);
            let mut picked: Vec<NodeId> = Vec::with_capacity(wanted);
            let mut attempts = 0;
            while picked.len() < wanted && attempts < wanted * 10 + 20 {
                attempts += 1;
                let candidate = &targets[rng.gen_range(0..targets.len())];
                if (same_type && candidate == src) || picked.contains(candidate) {
                    continue;
                }
                picked.push(candidate.clone());
            }
            for dst in picked {
                add_edge(&mut nodes, src, edge.edge, &dst, edge.reverse);
            }
        }
    }

    let mut edge_types: BTreeSet<String> = BTreeSet::new();
    let mut reciprocity = Vec::new();
    for edge in schema.edges {
        edge_types.insert(edge.edge.to_string());
        edge_types.insert(edge.reverse.to_string());
        reciprocity.push(ReciprocityRule {
            src_type: edge.src.to_string(),
            edge_type: edge.edge.to_string(),
            dst_type: edge.dst.to_string(),
            reverse_edge_type: edge.reverse.to_string(),
        });
    }
    let manifest = GraphManifest {
        graph_id: cfg.graph_id.clone(),
        domain: cfg.domain.to_string(),
        node_types: schema.node_types.iter().map(|t| t.name.to_string()).collect(),
        edge_types: edge_types.into_iter().collect(),
        reciprocity,
        description: schema.description.to_string(),
    };
    let type_edges = edges_of_type
        .into_iter()
        .map(|(t, set)| (t.to_string(), set.into_iter().map(str::to_string).collect()))
        .collect();

    Ok(Graph::from_parts(nodes, manifest, type_edges))
}

/// Insert `src -edge-> dst` and its mirror, skipping entries already there.
fn add_edge(
    nodes: &mut BTreeMap<NodeId, Node>,
    src: &NodeId,
    edge: &str,
    dst: &NodeId,
    reverse: &str,
) {
    let forward = nodes
        .get_mut(src)
        .expect("edge source exists")
        .neighbors
        .get_mut(edge)
        .expect("edge key prepared");
    if !forward.contains(dst) {
        forward.push(dst.clone());
    }
    let backward = nodes
        .get_mut(dst)
        .expect("edge target exists")
        .neighbors
        .get_mut(reverse)
        .expect("reverse key prepared");
    if !backward.contains(src) {
        backward.push(src.clone());
    }
}

enum DegreeSampler {
    Uniform { min: usize, max: usize },
    PowerLaw { cumulative: Vec<f64> },
}

impl DegreeSampler {
    fn new(dist: DegreeDist, available: usize) -> Self {
        match dist {
            DegreeDist::Uniform { min, max } => DegreeSampler::Uniform {
                min: min.min(available),
                max: max.min(available),
            },
            DegreeDist::PowerLaw { exponent, cap } => {
                DegreeSampler::PowerLaw { cumulative: power_law_cdf(exponent, cap.min(available)) }
            }
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        match self {
            DegreeSampler::Uniform { min, max } => {
                if min >= max {
                    *min
                } else {
                    rng.gen_range(*min..=*max)
                }
            }
            DegreeSampler::PowerLaw { cumulative } => {
                let u: f64 = rng.gen();
                match cumulative.iter().position(|c| u <= *c) {
                    Some(i) => i + 1,
                    None => cumulative.len(),
                }
            }
        }
    }
}

/// Cumulative distribution of P(k) proportional to k^-exponent, k in [1, cap].
pub fn power_law_cdf(exponent: f64, cap: usize) -> Vec<f64> {
    let cap = cap.max(1);
    let weights: Vec<f64> = (1..=cap).map(|k| (k as f64).powf(-exponent)).collect();
    let total: f64 = weights.iter().sum();
    let mut cumulative = Vec::with_capacity(cap);
    let mut acc = 0.0;
    for w in weights {
        acc += w / total;
        cumulative.push(acc);
    }
    cumulative
}

// --- feature synthesis ---

struct ValueFactory {
    used: HashMap<(String, String), HashSet<String>>,
    case_pools: HashMap<(String, String), Vec<String>>,
    name_counter: usize,
}

impl ValueFactory {
    fn new() -> Self {
        ValueFactory {
            used: HashMap::new(),
            case_pools: HashMap::new(),
            name_counter: 0,
        }
    }

    fn synthesize(
        &mut self,
        node_type: &str,
        feature: &str,
        gen: FeatureGen,
        type_count: usize,
        rng: &mut ChaCha8Rng,
    ) -> FeatureValue {
        match gen {
            FeatureGen::Title { min_words, max_words } => {
                let pool = pool_words(domain_title_pool(node_type));
                let value = self.unique(node_type, feature, rng, |rng| {
                    words_from(pool, rng.gen_range(min_words..=max_words), rng)
                });
                FeatureValue::Text(value)
            }
            FeatureGen::Sentence { min_words, max_words } => {
                let length = rng.gen_range(min_words..=max_words);
                FeatureValue::Text(sentence(rng, length))
            }
            FeatureGen::PersonName => {
                let value = self.unique(node_type, feature, rng, person_name);
                FeatureValue::Text(value)
            }
            FeatureGen::Entity { pool, unique } => {
                let value = if unique {
                    self.unique(node_type, feature, rng, |rng| entity_name(pool, rng))
                } else {
                    entity_name(pool, rng)
                };
                FeatureValue::Text(value)
            }
            FeatureGen::Year { min, max } => {
                FeatureValue::Text(rng.gen_range(min..=max).to_string())
            }
            FeatureGen::Decimal { min, max } => FeatureValue::Text(format!(
                "{}.{:02}",
                rng.gen_range(min..=max),
                rng.gen_range(0..100)
            )),
            FeatureGen::Int { min, max } => {
                FeatureValue::Text(rng.gen_range(min..=max).to_string())
            }
            FeatureGen::Choice { pool } => {
                let words = pool_words(pool);
                FeatureValue::Text(words[rng.gen_range(0..words.len())].to_string())
            }
            FeatureGen::WordList { pool, min, max } => {
                let words = pool_words(pool);
                let count = rng.gen_range(min..=max).min(words.len());
                let picks = rand::seq::index::sample(rng, words.len(), count);
                FeatureValue::List(picks.iter().map(|i| words[i].to_string()).collect())
            }
            FeatureGen::CaseName => {
                let key = (node_type.to_string(), feature.to_string());
                if !self.case_pools.contains_key(&key) {
                    let pool_size = (type_count / 3).max(4);
                    let mut pool = Vec::with_capacity(pool_size);
                    let mut seen = HashSet::new();
                    while pool.len() < pool_size {
                        let name = format!("{} v. {}", person_name(rng), person_name(rng));
                        if seen.insert(name.clone()) {
                            pool.push(name);
                        }
                    }
                    self.case_pools.insert(key.clone(), pool);
                }
                let pool = &self.case_pools[&key];
                FeatureValue::Text(pool[rng.gen_range(0..pool.len())].clone())
            }
            FeatureGen::Date { min_year, max_year } => FeatureValue::Text(format!(
                "{:04}-{:02}-{:02}",
                rng.gen_range(min_year..=max_year),
                rng.gen_range(1..=12u32),
                rng.gen_range(1..=28u32)
            )),
            FeatureGen::Digits { len } => {
                let value = self.unique(node_type, feature, rng, |rng| {
                    (0..len).map(|_| char::from(b'0' + rng.gen_range(0..10u8))).collect()
                });
                FeatureValue::Text(value)
            }
            FeatureGen::NameList { min, max } => {
                let count = rng.gen_range(min..=max);
                let names: Vec<String> = (0..count).map(|_| person_name(rng)).collect();
                FeatureValue::Text(names.join(", "))
            }
        }
    }

    /// Draw until the value is fresh for (node_type, feature); after a few
    /// collisions a running counter keeps the value unique anyway.
    fn unique(
        &mut self,
        node_type: &str,
        feature: &str,
        rng: &mut ChaCha8Rng,
        mut draw: impl FnMut(&mut ChaCha8Rng) -> String,
    ) -> String {
        let key = (node_type.to_string(), feature.to_string());
        let seen = self.used.entry(key).or_default();
        for _ in 0..20 {
            let value = draw(rng);
            if seen.insert(value.clone()) {
                return value;
            }
        }
        loop {
            self.name_counter += 1;
            let value = format!("{} {}", draw(rng), self.name_counter);
            if seen.insert(value.clone()) {
                return value;
            }
        }
    }
}

fn words_from(pool: &[&str], count: usize, rng: &mut ChaCha8Rng) -> String {
    let mut words = Vec::with_capacity(count);
    for _ in 0..count.max(1) {
        words.push(pool[rng.gen_range(0..pool.len())]);
    }
    words.join(" ")
}

fn sentence(rng: &mut ChaCha8Rng, length: usize) -> String {
    let mut words = Vec::with_capacity(length);
    for i in 0..length.max(3) {
        let pool = if i % 3 == 2 { CONNECTORS } else { PROSE_WORDS };
        words.push(pool[rng.gen_range(0..pool.len())]);
    }
    words.join(" ")
}

fn person_name(rng: &mut ChaCha8Rng) -> String {
    format!(
        "{} {}",
        FIRST_NAMES[rng.gen_range(0..FIRST_NAMES.len())],
        LAST_NAMES[rng.gen_range(0..LAST_NAMES.len())]
    )
}

fn entity_name(pool: Pool, rng: &mut ChaCha8Rng) -> String {
    let nouns = pool_words(pool);
    match pool {
        Pool::VenueNouns => format!(
            "the {} of {}",
            ["journal", "annals", "letters", "review", "transactions"][rng.gen_range(0..5)],
            nouns[rng.gen_range(0..nouns.len())]
        ),
        Pool::CourtRegions => format!(
            "{} court of {}",
            ["district", "appellate", "superior", "circuit"][rng.gen_range(0..4)],
            nouns[rng.gen_range(0..nouns.len())]
        ),
        Pool::OrgNouns => format!(
            "{} {}",
            ["institute of", "university of", "center for", "laboratory of"][rng.gen_range(0..4)],
            nouns[rng.gen_range(0..nouns.len())]
        ),
        _ => format!(
            "{} {}",
            ADJECTIVES[rng.gen_range(0..ADJECTIVES.len())],
            nouns[rng.gen_range(0..nouns.len())]
        ),
    }
}

fn domain_title_pool(node_type: &str) -> Pool {
    match node_type {
        "item" => Pool::ProductWords,
        "book" | "series" => Pool::BookWords,
        _ => Pool::ScienceWords,
    }
}

fn pool_words(pool: Pool) -> &'static [&'static str] {
    match pool {
        Pool::ScienceWords => SCIENCE_WORDS,
        Pool::TopicWords => TOPIC_WORDS,
        Pool::ProductWords => PRODUCT_WORDS,
        Pool::BookWords => BOOK_WORDS,
        Pool::OrgNouns => ORG_NOUNS,
        Pool::VenueNouns => VENUE_NOUNS,
        Pool::BrandNouns => BRAND_NOUNS,
        Pool::PublisherNouns => PUBLISHER_NOUNS,
        Pool::HealthTerms => HEALTH_TERMS,
        Pool::CourtRegions => COURT_REGIONS,
        Pool::Languages => LANGUAGES,
        Pool::LanguageCodes => LANGUAGE_CODES,
        Pool::CountryCodes => COUNTRY_CODES,
        Pool::Formats => FORMATS,
        Pool::Booleans => BOOLEANS,
        Pool::Genres => GENRES,
        Pool::Shelves => SHELVES,
        Pool::Categories => CATEGORIES,
    }
}

static TOPIC_WORDS: &[&str] = &[
    "catalysis", "cosmology", "genomics", "hydrology", "magnetism", "optimization",
    "photonics", "robotics", "seismology", "spectroscopy", "thermodynamics", "turbulence",
];

static ADJECTIVES: &[&str] = &[
    "adaptive", "ambient", "coastal", "crimson", "crystal", "dormant", "eastern", "elastic",
    "emergent", "floating", "gilded", "granular", "hollow", "iterative", "lunar", "modular",
    "northern", "oblique", "polar", "quiet", "radiant", "rustic", "silent", "solar", "sparse",
    "spectral", "stochastic", "teal", "thermal", "umbral", "vernal", "violet", "western", "wild",
];

static SCIENCE_WORDS: &[&str] = &[
    "accretion", "algebraic", "annealing", "attention", "bayesian", "boundary", "catalytic",
    "coherence", "convection", "convergence", "coupling", "decay", "diffusion", "disks",
    "dynamics", "eigenvalue", "entanglement", "entropy", "equilibrium", "feedback", "fermion",
    "flux", "gradient", "graphs", "harmonic", "inference", "instability", "interference",
    "kernels", "lattice", "magnetic", "manifolds", "membranes", "mesoscale", "modeling",
    "momentum", "networks", "neutrino", "optimization", "orbital", "oscillation", "perturbation",
    "photon", "plasma", "polymer", "propagation", "quantum", "regression", "relaxation",
    "resonance", "scattering", "sediment", "simulation", "solvent", "spectra", "stellar",
    "substrate", "symmetry", "synthesis", "topology", "transport", "turbulence", "vortex",
    "wavelet",
];

static PRODUCT_WORDS: &[&str] = &[
    "anchor", "apron", "backpack", "beacon", "blender", "bottle", "bracket", "camera", "canister",
    "charger", "cleat", "compass", "cooker", "cradle", "daypack", "derailleur", "diffuser",
    "dumbbell", "easel", "fairing", "flashlight", "gasket", "gauge", "griddle", "grinder",
    "hammock", "headlamp", "holster", "kettle", "lantern", "mallet", "mitt", "mixer", "mount",
    "organizer", "paddle", "pannier", "planer", "pruner", "rack", "roaster", "sander", "satchel",
    "skillet", "sleeve", "spindle", "stand", "steamer", "strap", "tripod", "trowel", "tumbler",
    "visor", "wrench",
];

static BOOK_WORDS: &[&str] = &[
    "archive", "ashes", "autumn", "ballad", "border", "bridge", "castle", "chronicle", "cipher",
    "compass", "crossing", "crown", "daughter", "ember", "exile", "garden", "harbor", "harvest",
    "heir", "hollow", "horizon", "island", "journey", "keeper", "kingdom", "lantern", "legacy",
    "letters", "meridian", "midnight", "mirror", "orchard", "passage", "pilgrim", "prophecy",
    "raven", "reckoning", "refuge", "river", "season", "shadow", "shore", "songbird", "sparrow",
    "thorn", "tide", "tower", "vineyard", "voyage", "winter",
];

static ORG_NOUNS: &[&str] = &[
    "applied geometry", "atmospheric studies", "cellular dynamics", "coastal engineering",
    "cognitive systems", "computational imaging", "data ethics", "deep materials",
    "energy storage", "field robotics", "glacier research", "marine acoustics",
    "molecular design", "network science", "optics research", "planetary science",
    "quantitative biology", "seismic analysis", "systems modeling", "urban informatics",
];

static VENUE_NOUNS: &[&str] = &[
    "applied mechanics", "astrophysics", "atmospheric science", "combinatorics",
    "computational linguistics", "condensed matter", "ecology", "fluid dynamics", "genomics",
    "geophysics", "machine intelligence", "materials", "neuroscience", "numerical analysis",
    "oceanography", "photonics", "soft matter", "statistics", "theoretical biology",
];

static BRAND_NOUNS: &[&str] = &[
    "alloyworks", "basecamp", "bluepine", "brightforge", "cascade", "cedarline", "copperfield",
    "driftwood", "evergreen", "fieldstone", "granite", "harborline", "ironvale", "juniper",
    "keystone", "larkspur", "meadowcraft", "northbay", "oakridge", "quarry", "ridgeline",
    "sagebrush", "stonewell", "summit", "timberline", "trailhead", "westwind",
];

static PUBLISHER_NOUNS: &[&str] = &[
    "arbor press", "birchwood books", "bluegate publishing", "cobblestone house",
    "falcon editions", "fernwood press", "greenlake books", "harbor house", "inkwell press",
    "lanternlight books", "maplewood press", "northstar publishing", "quillstone house",
    "rivermouth books", "silverbirch press", "stonebridge editions", "willowmere house",
];

static HEALTH_TERMS: &[&str] = &[
    "axon", "basal", "capillary", "cardiac", "cortical", "cytokine", "dermal", "endocrine",
    "epithelial", "fibrous", "ganglion", "gastric", "glial", "hepatic", "immune", "keratin",
    "lymphatic", "membrane", "mitochondrial", "mucosal", "myelin", "neural", "ocular", "osseous",
    "pancreatic", "plasma", "pulmonary", "renal", "ribosomal", "serotonin", "synaptic",
    "thalamic", "vascular", "venous", "vesicle",
];

static COURT_REGIONS: &[&str] = &[
    "alder county", "bridgewater", "cedar falls", "dunmore", "eastvale", "fairhaven",
    "granite bay", "harrow", "kingsford", "lakemont", "maplewood", "northfield", "oakhurst",
    "pinecrest", "queensbury", "redwood valley", "silverton", "thornbury", "westbrook",
];

static LANGUAGES: &[&str] = &["en", "de", "fr", "es", "zh"];
static LANGUAGE_CODES: &[&str] = &["eng", "spa", "fre", "ger", "ita", "por"];
static COUNTRY_CODES: &[&str] = &["US", "GB", "DE", "FR", "CA", "AU"];
static FORMATS: &[&str] = &["paperback", "hardcover", "ebook", "audiobook"];
static BOOLEANS: &[&str] = &["true", "false"];

static GENRES: &[&str] = &[
    "adventure", "biography", "fantasy", "historical", "horror", "mystery", "poetry", "romance",
    "science fiction", "thriller", "western",
];

static SHELVES: &[&str] = &[
    "to-read", "favorites", "classics", "book-club", "beach-reads", "long-haul", "rainy-day",
    "re-reads", "staff-picks", "translated",
];

static CATEGORIES: &[&str] = &[
    "camping", "cycling", "electronics", "fitness", "garden", "kitchen", "office", "outdoors",
    "photography", "tools", "travel", "woodworking",
];

static PROSE_WORDS: &[&str] = &[
    "account", "analysis", "argument", "balance", "circuit", "claim", "context", "contrast",
    "course", "detail", "evidence", "figure", "finding", "framework", "ground", "history",
    "impact", "margin", "matter", "measure", "method", "motion", "notice", "outcome", "pattern",
    "phase", "practice", "principle", "process", "record", "region", "report", "result",
    "review", "rule", "sample", "scale", "scheme", "scope", "signal", "source", "standard",
    "structure", "study", "survey", "system", "term", "theory", "trial", "value",
];

static CONNECTORS: &[&str] = &[
    "across", "against", "along", "among", "around", "between", "beyond", "during", "from",
    "into", "over", "through", "toward", "under", "within", "without",
];

static FIRST_NAMES: &[&str] = &[
    "adele", "amos", "anya", "bela", "boris", "carmen", "casper", "dariusz", "edith", "elio",
    "esther", "felix", "greta", "hana", "hugo", "ines", "ivan", "jonas", "karin", "leila",
    "lionel", "maeve", "marco", "mireille", "nadia", "nils", "oskar", "petra", "quentin", "rosa",
    "ruben", "saskia", "soren", "tamsin", "tobias", "una", "viktor", "wanda", "yara", "zeno",
];

static LAST_NAMES: &[&str] = &[
    "abramov", "baranski", "calloway", "demir", "eriksen", "falk", "gallego", "hartwell",
    "ibanez", "jansson", "kovacs", "lindqvist", "marchetti", "novak", "okafor", "petrov",
    "quintana", "rahman", "sorola", "takacs", "umehara", "vasquez", "wexler", "xanthos",
    "yamada", "zielinski", "ashford", "bellamy", "cardona", "duval", "ellington", "fontaine",
    "grimaldi", "holloway", "ivers", "jimenez", "keller", "lombardi", "moreau", "nystrom",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load::verify_reciprocity;

    #[test]
    fn same_seed_is_byte_identical() {
        let cfg = SynthConfig::sized(Domain::Academic, 300, 7);
        let a = generate_synthetic_graph(&cfg).unwrap();
        let b = generate_synthetic_graph(&cfg).unwrap();
        assert_eq!(a.to_node_json(), b.to_node_json());
        assert_eq!(a.manifest().to_json(), b.manifest().to_json());
        let other = generate_synthetic_graph(&SynthConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(a.to_node_json(), other.to_node_json());
    }

    #[test]
    fn generated_graphs_pass_strict_invariants() {
        for domain in Domain::ALL {
            let cfg = SynthConfig::sized(domain, 250, 11);
            let graph = generate_synthetic_graph(&cfg).unwrap();
            verify_reciprocity(&graph).unwrap_or_else(|e| panic!("{domain}: {e}"));
            // the serialized form reloads strictly
            let (reloaded, report) =
                Graph::from_json(&graph.to_node_json(), &graph.manifest().to_json(), true)
                    .unwrap_or_else(|e| panic!("{domain}: {e}"));
            assert_eq!(report.dangling_dropped, 0);
            assert_eq!(reloaded.node_count(), graph.node_count());
        }
    }

    #[test]
    fn sizes_respected() {
        let cfg = SynthConfig::sized(Domain::Ecommerce, 200, 3);
        let graph = generate_synthetic_graph(&cfg).unwrap();
        let items = graph.nodes_of_type("item").count();
        let brands = graph.nodes_of_type("brand").count();
        assert_eq!(items, cfg.sizes["item"]);
        assert_eq!(brands, cfg.sizes["brand"]);
    }

    #[test]
    fn unknown_size_key_rejected() {
        let mut cfg = SynthConfig::sized(Domain::Academic, 100, 1);
        cfg.sizes.insert("meteor".to_string(), 5);
        assert!(matches!(
            generate_synthetic_graph(&cfg),
            Err(BenchError::UnknownNodeType { .. })
        ));
    }

    #[test]
    fn titles_are_unique_within_type() {
        let cfg = SynthConfig::sized(Domain::Academic, 800, 5);
        let graph = generate_synthetic_graph(&cfg).unwrap();
        let mut seen = std::collections::HashSet::new();
        for node in graph.nodes_of_type("paper") {
            let title = node.feature("title").unwrap().as_text().unwrap().to_string();
            assert!(seen.insert(title), "duplicate title");
        }
    }

    #[test]
    fn power_law_cdf_is_monotone_and_normalized() {
        let cdf = power_law_cdf(2.5, 50);
        assert_eq!(cdf.len(), 50);
        assert!(cdf.windows(2).all(|w| w[0] <= w[1]));
        assert!((cdf.last().unwrap() - 1.0).abs() < 1e-12);
    }
}
