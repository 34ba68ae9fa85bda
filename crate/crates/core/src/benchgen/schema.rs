//! The five reference domain schemas: node types with feature recipes,
//! typed edges with reciprocity, degree distributions, and the
//! natural-language graph descriptions shown to LLMs.

use serde::{Deserialize, Serialize};

use super::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Academic,
    Ecommerce,
    Literature,
    Healthcare,
    Legal,
}

impl Domain {
    pub const ALL: [Domain; 5] = [
        Domain::Academic,
        Domain::Ecommerce,
        Domain::Literature,
        Domain::Healthcare,
        Domain::Legal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Academic => "academic",
            Domain::Ecommerce => "ecommerce",
            Domain::Literature => "literature",
            Domain::Healthcare => "healthcare",
            Domain::Legal => "legal",
        }
    }

    pub fn parse(value: &str) -> Result<Domain, BenchError> {
        match value.to_ascii_lowercase().as_str() {
            "academic" => Ok(Domain::Academic),
            "ecommerce" | "e-commerce" => Ok(Domain::Ecommerce),
            "literature" => Ok(Domain::Literature),
            "healthcare" => Ok(Domain::Healthcare),
            "legal" => Ok(Domain::Legal),
            other => Err(BenchError::UnknownDomain(other.to_string())),
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How one feature's value is synthesized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureGen {
    /// Multi-word title, unique within the node type.
    Title { min_words: usize, max_words: usize },
    /// Free-running sentence-ish text (abstracts, descriptions, opinions).
    Sentence { min_words: usize, max_words: usize },
    /// "first last" person name, unique within the node type.
    PersonName,
    /// "adjective noun" entity name drawn over a noun pool.
    Entity { pool: Pool, unique: bool },
    /// Year as text.
    Year { min: u32, max: u32 },
    /// Price-like decimal as text.
    Decimal { min: u32, max: u32 },
    /// Integer as text.
    Int { min: u32, max: u32 },
    /// One value from a fixed pool.
    Choice { pool: Pool },
    /// List feature with values from a pool.
    WordList { pool: Pool, min: usize, max: usize },
    /// "name v. name" case title drawn from a deliberately small pool so
    /// several nodes share one (multi-docket cases are part of the domain).
    CaseName,
    /// "yyyy-mm-dd" text.
    Date { min_year: u32, max_year: u32 },
    /// Fixed-length digit string, unique within the node type.
    Digits { len: usize },
    /// Comma-joined list of person names (judges, attorneys).
    NameList { min: usize, max: usize },
}

/// Word pools used by the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pool {
    ScienceWords,
    TopicWords,
    ProductWords,
    BookWords,
    OrgNouns,
    VenueNouns,
    BrandNouns,
    PublisherNouns,
    HealthTerms,
    CourtRegions,
    Languages,
    LanguageCodes,
    CountryCodes,
    Formats,
    Booleans,
    Genres,
    Shelves,
    Categories,
}

#[derive(Debug, Clone, Copy)]
pub struct FeatureSpec {
    pub name: &'static str,
    pub gen: FeatureGen,
}

#[derive(Debug, Clone, Copy)]
pub struct NodeTypeSpec {
    pub name: &'static str,
    pub features: &'static [FeatureSpec],
    /// Share of the total node budget given to this type.
    pub weight: f64,
    /// Lower bound regardless of the budget.
    pub min_count: usize,
}

/// Out-degree distribution of a generated edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegreeDist {
    Uniform { min: usize, max: usize },
    /// Discrete power law P(k) proportional to k^-exponent on [1, cap].
    PowerLaw { exponent: f64, cap: usize },
}

/// One generated edge family: for every `src` node a degree is drawn and
/// that many distinct `dst` targets are linked under `edge`; the mirror
/// entry is written under `reverse` on the target.
#[derive(Debug, Clone, Copy)]
pub struct EdgeSpec {
    pub src: &'static str,
    pub edge: &'static str,
    pub dst: &'static str,
    pub reverse: &'static str,
    pub degree: DegreeDist,
}

#[derive(Debug, Clone, Copy)]
pub struct DomainSchema {
    pub domain: Domain,
    pub description: &'static str,
    pub node_types: &'static [NodeTypeSpec],
    pub edges: &'static [EdgeSpec],
}

pub fn domain_schema(domain: Domain) -> &'static DomainSchema {
    match domain {
        Domain::Academic => &ACADEMIC,
        Domain::Ecommerce => &ECOMMERCE,
        Domain::Literature => &LITERATURE,
        Domain::Healthcare => &HEALTHCARE,
        Domain::Legal => &LEGAL,
    }
}

const fn uniform(min: usize, max: usize) -> DegreeDist {
    DegreeDist::Uniform { min, max }
}

pub static ACADEMIC: DomainSchema = DomainSchema {
    domain: Domain::Academic,
    description: "There are three types of nodes in the graph: paper, author and venue. Paper \
nodes have features: title, abstract, keywords, lang, and year. Author nodes have features: \
name and organization. Venue nodes have features: name. Paper nodes are linked to their author \
nodes, venue nodes, reference nodes (the papers this paper cite) and cited by nodes (other \
papers which cite this paper). Author nodes are linked to their paper nodes. Venue nodes are \
linked to their paper nodes.",
    node_types: &[
        NodeTypeSpec {
            name: "paper",
            weight: 0.62,
            min_count: 6,
            features: &[
                FeatureSpec { name: "title", gen: FeatureGen::Title { min_words: 4, max_words: 8 } },
                FeatureSpec { name: "abstract", gen: FeatureGen::Sentence { min_words: 14, max_words: 28 } },
                FeatureSpec { name: "keywords", gen: FeatureGen::WordList { pool: Pool::TopicWords, min: 2, max: 4 } },
                FeatureSpec { name: "lang", gen: FeatureGen::Choice { pool: Pool::Languages } },
                FeatureSpec { name: "year", gen: FeatureGen::Year { min: 1985, max: 2020 } },
            ],
        },
        NodeTypeSpec {
            name: "author",
            weight: 0.33,
            min_count: 4,
            features: &[
                FeatureSpec { name: "name", gen: FeatureGen::PersonName },
                FeatureSpec { name: "organization", gen: FeatureGen::Entity { pool: Pool::OrgNouns, unique: false } },
            ],
        },
        NodeTypeSpec {
            name: "venue",
            weight: 0.05,
            min_count: 3,
            features: &[FeatureSpec { name: "name", gen: FeatureGen::Entity { pool: Pool::VenueNouns, unique: true } }],
        },
    ],
    edges: &[
        EdgeSpec { src: "paper", edge: "author", dst: "author", reverse: "paper", degree: uniform(1, 3) },
        EdgeSpec { src: "paper", edge: "venue", dst: "venue", reverse: "paper", degree: uniform(1, 2) },
        EdgeSpec {
            src: "paper",
            edge: "cited_by",
            dst: "paper",
            reverse: "reference",
            degree: DegreeDist::PowerLaw { exponent: 2.5, cap: 60 },
        },
    ],
};

pub static ECOMMERCE: DomainSchema = DomainSchema {
    domain: Domain::Ecommerce,
    description: "There are two types of nodes in the graph: item and brand. Item nodes have \
features: title, description, price, category. Brand nodes have features: name. Item nodes are \
linked to their brand nodes, also viewed item nodes, buy after viewing item nodes, also bought \
item nodes, bought together item nodes. Brand nodes are linked to their item nodes.",
    node_types: &[
        NodeTypeSpec {
            name: "item",
            weight: 0.9,
            min_count: 8,
            features: &[
                FeatureSpec { name: "title", gen: FeatureGen::Title { min_words: 3, max_words: 7 } },
                FeatureSpec { name: "description", gen: FeatureGen::Sentence { min_words: 10, max_words: 20 } },
                FeatureSpec { name: "price", gen: FeatureGen::Decimal { min: 3, max: 300 } },
                FeatureSpec { name: "category", gen: FeatureGen::WordList { pool: Pool::Categories, min: 1, max: 3 } },
            ],
        },
        NodeTypeSpec {
            name: "brand",
            weight: 0.1,
            min_count: 4,
            features: &[FeatureSpec { name: "name", gen: FeatureGen::Entity { pool: Pool::BrandNouns, unique: true } }],
        },
    ],
    edges: &[
        EdgeSpec { src: "item", edge: "brand", dst: "brand", reverse: "item", degree: uniform(1, 1) },
        EdgeSpec { src: "item", edge: "also_viewed_item", dst: "item", reverse: "also_viewed_item", degree: uniform(2, 5) },
        EdgeSpec { src: "item", edge: "also_bought_item", dst: "item", reverse: "also_bought_item", degree: uniform(2, 5) },
        EdgeSpec { src: "item", edge: "bought_together_item", dst: "item", reverse: "bought_together_item", degree: uniform(1, 3) },
        EdgeSpec { src: "item", edge: "buy_after_viewing_item", dst: "item", reverse: "buy_after_viewing_item", degree: uniform(1, 3) },
    ],
};

pub static LITERATURE: DomainSchema = DomainSchema {
    domain: Domain::Literature,
    description: "There are four types of nodes in the graph: book, author, publisher, and \
series. Book nodes have features: country code, language code, is ebook, title, description, \
format, num pages, publication year, popular shelves, and genres. Author nodes have features: \
name. Publisher nodes have features: name. Series nodes have features: title and description. \
Book nodes are linked to their author nodes, publisher nodes, series nodes and similar books \
nodes. Author nodes are linked to their book nodes. Publisher nodes are linked to their book \
nodes. Series nodes are linked to their book nodes.",
    node_types: &[
        NodeTypeSpec {
            name: "book",
            weight: 0.58,
            min_count: 8,
            features: &[
                FeatureSpec { name: "country_code", gen: FeatureGen::Choice { pool: Pool::CountryCodes } },
                FeatureSpec { name: "language_code", gen: FeatureGen::Choice { pool: Pool::LanguageCodes } },
                FeatureSpec { name: "is_ebook", gen: FeatureGen::Choice { pool: Pool::Booleans } },
                FeatureSpec { name: "title", gen: FeatureGen::Title { min_words: 2, max_words: 6 } },
                FeatureSpec { name: "description", gen: FeatureGen::Sentence { min_words: 10, max_words: 22 } },
                FeatureSpec { name: "format", gen: FeatureGen::Choice { pool: Pool::Formats } },
                FeatureSpec { name: "num_pages", gen: FeatureGen::Int { min: 80, max: 900 } },
                FeatureSpec { name: "publication_year", gen: FeatureGen::Year { min: 1950, max: 2020 } },
                FeatureSpec { name: "popular_shelves", gen: FeatureGen::WordList { pool: Pool::Shelves, min: 2, max: 5 } },
                FeatureSpec { name: "genres", gen: FeatureGen::WordList { pool: Pool::Genres, min: 1, max: 3 } },
            ],
        },
        NodeTypeSpec {
            name: "author",
            weight: 0.24,
            min_count: 4,
            features: &[FeatureSpec { name: "name", gen: FeatureGen::PersonName }],
        },
        NodeTypeSpec {
            name: "publisher",
            weight: 0.08,
            min_count: 3,
            features: &[FeatureSpec { name: "name", gen: FeatureGen::Entity { pool: Pool::PublisherNouns, unique: true } }],
        },
        NodeTypeSpec {
            name: "series",
            weight: 0.1,
            min_count: 3,
            features: &[
                FeatureSpec { name: "title", gen: FeatureGen::Title { min_words: 2, max_words: 4 } },
                FeatureSpec { name: "description", gen: FeatureGen::Sentence { min_words: 8, max_words: 16 } },
            ],
        },
    ],
    edges: &[
        EdgeSpec { src: "book", edge: "author", dst: "author", reverse: "book", degree: uniform(1, 2) },
        EdgeSpec { src: "book", edge: "publisher", dst: "publisher", reverse: "book", degree: uniform(1, 1) },
        EdgeSpec { src: "book", edge: "series", dst: "series", reverse: "book", degree: uniform(0, 1) },
        EdgeSpec { src: "book", edge: "similar_books", dst: "book", reverse: "similar_books", degree: uniform(2, 4) },
    ],
};

const HEALTH_NAME: &[FeatureSpec] =
    &[FeatureSpec { name: "name", gen: FeatureGen::Entity { pool: Pool::HealthTerms, unique: true } }];

pub static HEALTHCARE: DomainSchema = DomainSchema {
    domain: Domain::Healthcare,
    description: "There are eleven types of nodes in the graph: Anatomy, Biological Process, \
Cellular Component, Compound, Disease, Gene, Molecular Function, Pathway, Pharmacologic Class, \
Side Effect, Symptom. Each node has name feature. There are these types of edges: \
Anatomy-downregulates-Gene, Anatomy-expresses-Gene, Anatomy-upregulates-Gene, \
Compound-binds-Gene, Compound-causes-Side Effect, Compound-downregulates-Gene, \
Compound-palliates-Disease, Compound-resembles-Compound, Compound-treats-Disease, \
Compound-upregulates-Gene, Disease-associates-Gene, Disease-downregulates-Gene, \
Disease-localizes-Anatomy, Disease-presents-Symptom, Disease-resembles-Disease, \
Disease-upregulates-Gene, Gene-covaries-Gene, Gene-interacts-Gene, \
Gene-participates-Biological Process, Gene-participates-Cellular Component, \
Gene-participates-Molecular Function, Gene-participates-Pathway, Gene-regulates-Gene, \
Pharmacologic Class-includes-Compound.",
    node_types: &[
        NodeTypeSpec { name: "anatomy", weight: 0.06, min_count: 3, features: HEALTH_NAME },
        NodeTypeSpec { name: "biological_process", weight: 0.08, min_count: 3, features: HEALTH_NAME },
        NodeTypeSpec { name: "cellular_component", weight: 0.05, min_count: 3, features: HEALTH_NAME },
        NodeTypeSpec { name: "compound", weight: 0.15, min_count: 4, features: HEALTH_NAME },
        NodeTypeSpec { name: "disease", weight: 0.12, min_count: 4, features: HEALTH_NAME },
        NodeTypeSpec { name: "gene", weight: 0.25, min_count: 5, features: HEALTH_NAME },
        NodeTypeSpec { name: "molecular_function", weight: 0.05, min_count: 3, features: HEALTH_NAME },
        NodeTypeSpec { name: "pathway", weight: 0.05, min_count: 3, features: HEALTH_NAME },
        NodeTypeSpec { name: "pharmacologic_class", weight: 0.02, min_count: 3, features: HEALTH_NAME },
        NodeTypeSpec { name: "side_effect", weight: 0.1, min_count: 4, features: HEALTH_NAME },
        NodeTypeSpec { name: "symptom", weight: 0.07, min_count: 4, features: HEALTH_NAME },
    ],
    edges: &[
        EdgeSpec { src: "anatomy", edge: "Anatomy-downregulates-Gene", dst: "gene", reverse: "Anatomy-downregulates-Gene", degree: uniform(1, 4) },
        EdgeSpec { src: "anatomy", edge: "Anatomy-expresses-Gene", dst: "gene", reverse: "Anatomy-expresses-Gene", degree: uniform(1, 5) },
        EdgeSpec { src: "anatomy", edge: "Anatomy-upregulates-Gene", dst: "gene", reverse: "Anatomy-upregulates-Gene", degree: uniform(1, 4) },
        EdgeSpec { src: "compound", edge: "Compound-binds-Gene", dst: "gene", reverse: "Compound-binds-Gene", degree: uniform(1, 3) },
        EdgeSpec { src: "compound", edge: "Compound-causes-Side Effect", dst: "side_effect", reverse: "Compound-causes-Side Effect", degree: uniform(1, 5) },
        EdgeSpec { src: "compound", edge: "Compound-downregulates-Gene", dst: "gene", reverse: "Compound-downregulates-Gene", degree: uniform(1, 3) },
        EdgeSpec { src: "compound", edge: "Compound-palliates-Disease", dst: "disease", reverse: "Compound-palliates-Disease", degree: uniform(1, 3) },
        EdgeSpec { src: "compound", edge: "Compound-resembles-Compound", dst: "compound", reverse: "Compound-resembles-Compound", degree: uniform(1, 3) },
        EdgeSpec { src: "compound", edge: "Compound-treats-Disease", dst: "disease", reverse: "Compound-treats-Disease", degree: uniform(1, 3) },
        EdgeSpec { src: "compound", edge: "Compound-upregulates-Gene", dst: "gene", reverse: "Compound-upregulates-Gene", degree: uniform(1, 3) },
        EdgeSpec { src: "disease", edge: "Disease-associates-Gene", dst: "gene", reverse: "Disease-associates-Gene", degree: uniform(1, 4) },
        EdgeSpec { src: "disease", edge: "Disease-downregulates-Gene", dst: "gene", reverse: "Disease-downregulates-Gene", degree: uniform(1, 3) },
        EdgeSpec { src: "disease", edge: "Disease-localizes-Anatomy", dst: "anatomy", reverse: "Disease-localizes-Anatomy", degree: uniform(1, 3) },
        EdgeSpec { src: "disease", edge: "Disease-presents-Symptom", dst: "symptom", reverse: "Disease-presents-Symptom", degree: uniform(1, 5) },
        EdgeSpec { src: "disease", edge: "Disease-resembles-Disease", dst: "disease", reverse: "Disease-resembles-Disease", degree: uniform(1, 3) },
        EdgeSpec { src: "disease", edge: "Disease-upregulates-Gene", dst: "gene", reverse: "Disease-upregulates-Gene", degree: uniform(1, 3) },
        EdgeSpec { src: "gene", edge: "Gene-covaries-Gene", dst: "gene", reverse: "Gene-covaries-Gene", degree: uniform(1, 3) },
        EdgeSpec { src: "gene", edge: "Gene-interacts-Gene", dst: "gene", reverse: "Gene-interacts-Gene", degree: uniform(1, 3) },
        EdgeSpec { src: "gene", edge: "Gene-participates-Biological Process", dst: "biological_process", reverse: "Gene-participates-Biological Process", degree: uniform(1, 4) },
        EdgeSpec { src: "gene", edge: "Gene-participates-Cellular Component", dst: "cellular_component", reverse: "Gene-participates-Cellular Component", degree: uniform(1, 3) },
        EdgeSpec { src: "gene", edge: "Gene-participates-Molecular Function", dst: "molecular_function", reverse: "Gene-participates-Molecular Function", degree: uniform(1, 3) },
        EdgeSpec { src: "gene", edge: "Gene-participates-Pathway", dst: "pathway", reverse: "Gene-participates-Pathway", degree: uniform(1, 3) },
        EdgeSpec { src: "gene", edge: "Gene-regulates-Gene", dst: "gene", reverse: "Gene-regulates-Gene", degree: uniform(1, 2) },
        EdgeSpec { src: "pharmacologic_class", edge: "Pharmacologic Class-includes-Compound", dst: "compound", reverse: "Pharmacologic Class-includes-Compound", degree: uniform(2, 6) },
    ],
};

pub static LEGAL: DomainSchema = DomainSchema {
    domain: Domain::Legal,
    description: "There are four types of nodes in the graph: opinion, opinion cluster, docket, \
and court. Opinion nodes have features: plain text. Opinion cluster nodes have features: \
syllabus, judges, case name, attorneys. Docket nodes have features: pacer case id, case name. \
Court nodes have features: full name, start date, end date, citation string. Opinion nodes are \
linked to their reference nodes and cited by nodes, as well as their opinion cluster nodes. \
Opinion cluster nodes are linked to opinion nodes and docket nodes. Docket nodes are linked to \
opinion cluster nodes and court nodes. Court nodes are linked to docket nodes.",
    node_types: &[
        NodeTypeSpec {
            name: "opinion",
            weight: 0.42,
            min_count: 6,
            features: &[FeatureSpec { name: "plain_text", gen: FeatureGen::Sentence { min_words: 12, max_words: 24 } }],
        },
        NodeTypeSpec {
            name: "opinion_cluster",
            weight: 0.3,
            min_count: 4,
            features: &[
                FeatureSpec { name: "judges", gen: FeatureGen::NameList { min: 1, max: 3 } },
                FeatureSpec { name: "case_name", gen: FeatureGen::CaseName },
                FeatureSpec { name: "attorneys", gen: FeatureGen::NameList { min: 1, max: 3 } },
                FeatureSpec { name: "syllabus", gen: FeatureGen::Sentence { min_words: 10, max_words: 20 } },
            ],
        },
        NodeTypeSpec {
            name: "docket",
            weight: 0.24,
            min_count: 4,
            features: &[
                FeatureSpec { name: "case_name", gen: FeatureGen::CaseName },
                FeatureSpec { name: "pacer_case_id", gen: FeatureGen::Digits { len: 7 } },
            ],
        },
        NodeTypeSpec {
            name: "court",
            weight: 0.04,
            min_count: 3,
            features: &[
                FeatureSpec { name: "citation_string", gen: FeatureGen::Entity { pool: Pool::CourtRegions, unique: false } },
                FeatureSpec { name: "full_name", gen: FeatureGen::Entity { pool: Pool::CourtRegions, unique: true } },
                FeatureSpec { name: "start_date", gen: FeatureGen::Date { min_year: 1890, max_year: 1990 } },
                FeatureSpec { name: "end_date", gen: FeatureGen::Date { min_year: 1991, max_year: 2024 } },
            ],
        },
    ],
    edges: &[
        EdgeSpec { src: "opinion", edge: "opinion_cluster", dst: "opinion_cluster", reverse: "opinion", degree: uniform(1, 1) },
        EdgeSpec { src: "opinion_cluster", edge: "docket", dst: "docket", reverse: "opinion_cluster", degree: uniform(1, 1) },
        EdgeSpec { src: "docket", edge: "court", dst: "court", reverse: "docket", degree: uniform(1, 1) },
        EdgeSpec {
            src: "opinion",
            edge: "cited_by",
            dst: "opinion",
            reverse: "reference",
            degree: DegreeDist::PowerLaw { exponent: 2.5, cap: 40 },
        },
    ],
};
