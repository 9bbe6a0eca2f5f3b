//! Vocabulary construction, document-term matrices, and TF-IDF weighting.
//!
//! The vocabulary is always sorted lexicographically and every matrix or
//! vector in the crate is indexed against that order, which makes runs
//! reproducible byte for byte.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::corpus::TermCounts;
use crate::matrix::Mat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DtmError {
    #[error("corpus contains no documents")]
    EmptyCorpus,
    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),
    #[error("term {0:?} is not in the vocabulary")]
    UnknownTerm(String),
    #[error("weight model covers {got} terms but the vocabulary has {expected}")]
    VocabularyMismatch { expected: usize, got: usize },
}

/// The sorted term list for one corpus, with per-term document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    df: Vec<usize>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic order.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, idx: usize) -> &str {
        &self.terms[idx]
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Number of documents the term at `idx` appeared in.
    pub fn df(&self, idx: usize) -> usize {
        self.df[idx]
    }
}

/// Collects the union of all document terms into a sorted [`Vocabulary`].
pub fn build_vocabulary(docs: &[TermCounts]) -> Result<Vocabulary, DtmError> {
    if docs.is_empty() {
        return Err(DtmError::EmptyCorpus);
    }
    let mut df_map: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in docs {
        for (term, _) in doc.iter() {
            *df_map.entry(term).or_insert(0) += 1;
        }
    }
    let mut terms = Vec::with_capacity(df_map.len());
    let mut df = Vec::with_capacity(df_map.len());
    let mut index = HashMap::with_capacity(df_map.len());
    for (term, d) in df_map {
        index.insert(term.to_owned(), terms.len());
        terms.push(term.to_owned());
        df.push(d);
    }
    Ok(Vocabulary { terms, df, index })
}

/// Sparse document-term count matrix. Row order follows the input document
/// order; entries within a row are sorted by term index.
#[derive(Debug, Clone)]
pub struct DocTermMatrix {
    doc_ids: Vec<String>,
    vocab: Arc<Vocabulary>,
    rows: Vec<Vec<(usize, u64)>>,
}

impl DocTermMatrix {
    pub fn n_docs(&self) -> usize {
        self.rows.len()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn count(&self, doc: usize, term: usize) -> u64 {
        let row = &self.rows[doc];
        match row.binary_search_by_key(&term, |&(t, _)| t) {
            Ok(pos) => row[pos].1,
            Err(_) => 0,
        }
    }

    pub fn row_entries(&self, doc: usize) -> &[(usize, u64)] {
        &self.rows[doc]
    }

    /// Dense counts, one row per document.
    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.n_docs(), self.vocab.len());
        for (d, row) in self.rows.iter().enumerate() {
            for &(t, c) in row {
                m[(d, t)] = c as f64;
            }
        }
        m
    }
}

pub fn build_dtm(
    docs: &[(String, TermCounts)],
    vocab: Arc<Vocabulary>,
) -> Result<DocTermMatrix, DtmError> {
    let mut seen: HashSet<&str> = HashSet::with_capacity(docs.len());
    let mut doc_ids = Vec::with_capacity(docs.len());
    let mut rows = Vec::with_capacity(docs.len());
    for (id, counts) in docs {
        if !seen.insert(id.as_str()) {
            return Err(DtmError::DuplicateDocId(id.clone()));
        }
        let mut row = Vec::with_capacity(counts.distinct_terms());
        for (term, count) in counts.iter() {
            let ti = vocab
                .index_of(term)
                .ok_or_else(|| DtmError::UnknownTerm(term.to_owned()))?;
            row.push((ti, count));
        }
        // term counts iterate lexicographically and the vocabulary is sorted
        // the same way, so indices arrive ascending
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        doc_ids.push(id.clone());
        rows.push(row);
    }
    Ok(DocTermMatrix { doc_ids, vocab, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfWeight {
    /// tf(c) = c
    Raw,
    /// tf(c) = 1 + ln c for c > 0, else 0
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdfWeight {
    /// idf = 1
    None,
    /// idf = ln(N / df)
    Plain,
    /// idf = ln((1 + N) / (1 + df)) + 1
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightingScheme {
    pub tf: TfWeight,
    pub idf: IdfWeight,
}

impl Default for WeightingScheme {
    fn default() -> Self {
        WeightingScheme { tf: TfWeight::Raw, idf: IdfWeight::Smooth }
    }
}

impl fmt::Display for WeightingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tf = match self.tf {
            TfWeight::Raw => "raw",
            TfWeight::Log => "log",
        };
        let idf = match self.idf {
            IdfWeight::None => "none",
            IdfWeight::Plain => "plain",
            IdfWeight::Smooth => "smooth",
        };
        write!(f, "{tf}-{idf}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown weighting scheme {0:?} (expected <raw|log>-<none|plain|smooth>)")]
pub struct ParseSchemeError(String);

impl FromStr for WeightingScheme {
    type Err = ParseSchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseSchemeError(s.to_owned());
        let (tf, idf) = s.split_once('-').ok_or_else(err)?;
        let tf = match tf {
            "raw" => TfWeight::Raw,
            "log" => TfWeight::Log,
            _ => return Err(err()),
        };
        let idf = match idf {
            "none" => IdfWeight::None,
            "plain" => IdfWeight::Plain,
            "smooth" => IdfWeight::Smooth,
            _ => return Err(err()),
        };
        Ok(WeightingScheme { tf, idf })
    }
}

/// IDF factors fitted on one corpus. Applying the model to any count vector
/// (in-corpus or external) multiplies the term-frequency transform by these
/// factors, so folded-in documents are weighted exactly like corpus rows.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightModel {
    scheme: WeightingScheme,
    n_docs: usize,
    idf: Vec<f64>,
}

impl WeightModel {
    pub fn scheme(&self) -> WeightingScheme {
        self.scheme
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }
}

fn tf_value(tf: TfWeight, count: u64) -> f64 {
    match tf {
        TfWeight::Raw => count as f64,
        TfWeight::Log => {
            if count > 0 {
                1.0 + (count as f64).ln()
            } else {
                0.0
            }
        }
    }
}

fn idf_value(idf: IdfWeight, n_docs: usize, df: usize) -> f64 {
    match idf {
        IdfWeight::None => 1.0,
        // df = 0 can only happen for a vocabulary not built from this corpus;
        // such a term carries no signal, so weight it away instead of ln(inf)
        IdfWeight::Plain if df == 0 => 0.0,
        IdfWeight::Plain => (n_docs as f64 / df as f64).ln(),
        IdfWeight::Smooth => ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0,
    }
}

pub fn fit_weights(dtm: &DocTermMatrix, scheme: WeightingScheme) -> Result<WeightModel, DtmError> {
    let n_docs = dtm.n_docs();
    if n_docs == 0 {
        return Err(DtmError::EmptyCorpus);
    }
    let vocab = dtm.vocab();
    let idf = (0..vocab.len()).map(|t| idf_value(scheme.idf, n_docs, vocab.df(t))).collect();
    Ok(WeightModel { scheme, n_docs, idf })
}

/// One dense weighted document vector over the vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVector {
    pub values: Vec<f64>,
}

impl WeightedVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0)
    }
}

pub fn apply_weights(
    dtm: &DocTermMatrix,
    model: &WeightModel,
) -> Result<Vec<WeightedVector>, DtmError> {
    let t = dtm.vocab().len();
    if model.idf.len() != t {
        return Err(DtmError::VocabularyMismatch { expected: t, got: model.idf.len() });
    }
    let mut out = Vec::with_capacity(dtm.n_docs());
    for d in 0..dtm.n_docs() {
        let mut values = vec![0.0; t];
        for &(ti, count) in dtm.row_entries(d) {
            values[ti] = tf_value(model.scheme.tf, count) * model.idf[ti];
        }
        out.push(WeightedVector { values });
    }
    Ok(out)
}

/// What was lost when an external document was restricted to the vocabulary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OovStats {
    /// Distinct out-of-vocabulary terms.
    pub dropped_terms: usize,
    /// Total occurrences of out-of-vocabulary terms.
    pub dropped_count: u64,
    /// Total occurrences in the document before restriction.
    pub total_count: u64,
}

impl OovStats {
    /// Fraction of token mass dropped; 0 for an empty document.
    pub fn dropped_mass(&self) -> f64 {
        if self.total_count == 0 {
            0.0
        } else {
            self.dropped_count as f64 / self.total_count as f64
        }
    }
}

/// Weights a document that was not part of the fitted corpus. Terms outside
/// the vocabulary are dropped and accounted for in the returned [`OovStats`];
/// in-vocabulary terms get exactly the same weight a corpus row would.
pub fn weight_external(
    counts: &TermCounts,
    model: &WeightModel,
    vocab: &Vocabulary,
) -> Result<(WeightedVector, OovStats), DtmError> {
    if model.idf.len() != vocab.len() {
        return Err(DtmError::VocabularyMismatch { expected: vocab.len(), got: model.idf.len() });
    }
    let mut values = vec![0.0; vocab.len()];
    let mut stats = OovStats::default();
    for (term, count) in counts.iter() {
        stats.total_count += count;
        match vocab.index_of(term) {
            Some(ti) => values[ti] = tf_value(model.scheme.tf, count) * model.idf[ti],
            None => {
                stats.dropped_terms += 1;
                stats.dropped_count += count;
            }
        }
    }
    Ok((WeightedVector { values }, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::count_terms;
    use proptest::prelude::*;

    fn two_doc_corpus() -> (Vec<(String, TermCounts)>, Arc<Vocabulary>) {
        let docs = vec![
            ("d1".to_string(), count_terms(&["rate", "rate", "inflation"])),
            ("d2".to_string(), count_terms(&["rate", "growth"])),
        ];
        let vocab = build_vocabulary(&docs.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>());
        (docs, Arc::new(vocab.unwrap()))
    }

    #[test]
    fn vocabulary_is_sorted_with_document_frequencies() {
        let (_, vocab) = two_doc_corpus();
        assert_eq!(vocab.terms(), ["growth", "inflation", "rate"]);
        assert_eq!((vocab.df(0), vocab.df(1), vocab.df(2)), (1, 1, 2));
        assert_eq!(vocab.index_of("rate"), Some(2));
        assert_eq!(vocab.index_of("unicorn"), None);
    }

    #[test]
    fn empty_corpus_is_rejected() {
        assert_eq!(build_vocabulary(&[]).unwrap_err(), DtmError::EmptyCorpus);
    }

    #[test]
    fn duplicate_document_ids_are_rejected() {
        let (mut docs, vocab) = two_doc_corpus();
        docs[1].0 = "d1".to_string();
        assert_eq!(
            build_dtm(&docs, vocab).unwrap_err(),
            DtmError::DuplicateDocId("d1".to_string())
        );
    }

    #[test]
    fn terms_outside_the_vocabulary_are_rejected() {
        let (_, vocab) = two_doc_corpus();
        let docs = vec![("d3".to_string(), count_terms(&["rate", "unicorn"]))];
        assert_eq!(
            build_dtm(&docs, vocab).unwrap_err(),
            DtmError::UnknownTerm("unicorn".to_string())
        );
    }

    #[test]
    fn counts_land_in_sorted_positions() {
        let (docs, vocab) = two_doc_corpus();
        let dtm = build_dtm(&docs, vocab).unwrap();
        assert_eq!(dtm.count(0, 2), 2);
        assert_eq!(dtm.count(0, 0), 0);
        assert_eq!(dtm.count(1, 0), 1);
        let dense = dtm.to_dense();
        assert_eq!(dense.row(0), &[0.0, 1.0, 2.0]);
        assert_eq!(dense.row(1), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn default_scheme_weights_match_hand_computation() {
        let (docs, vocab) = two_doc_corpus();
        let dtm = build_dtm(&docs, vocab).unwrap();
        let model = fit_weights(&dtm, WeightingScheme::default()).unwrap();
        // smooth idf with N = 2: df 1 -> ln(3/2) + 1, df 2 -> ln(3/3) + 1 = 1
        assert!((model.idf()[0] - 1.4054651081081644).abs() < 1e-15);
        assert!((model.idf()[1] - 1.4054651081081644).abs() < 1e-15);
        assert_eq!(model.idf()[2], 1.0);
        let rows = apply_weights(&dtm, &model).unwrap();
        assert_eq!(rows[0].values[2], 2.0);
        assert!((rows[0].values[1] - 1.4054651081081644).abs() < 1e-15);
        assert_eq!(rows[0].values[0], 0.0);
    }

    #[test]
    fn log_tf_and_plain_idf() {
        let (docs, vocab) = two_doc_corpus();
        let dtm = build_dtm(&docs, vocab).unwrap();
        let scheme = WeightingScheme { tf: TfWeight::Log, idf: IdfWeight::Plain };
        let model = fit_weights(&dtm, scheme).unwrap();
        // plain idf: df = N zeroes the term, df = 1 gives ln 2
        assert_eq!(model.idf()[2], 0.0);
        assert!((model.idf()[0] - std::f64::consts::LN_2).abs() < 1e-15);
        let rows = apply_weights(&dtm, &model).unwrap();
        // tf(2) = 1 + ln 2, then multiplied by idf 0
        assert_eq!(rows[0].values[2], 0.0);
        assert!((rows[1].values[0] - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn external_weighting_matches_corpus_rows_exactly() {
        let (docs, vocab) = two_doc_corpus();
        let dtm = build_dtm(&docs, vocab.clone()).unwrap();
        let model = fit_weights(&dtm, WeightingScheme::default()).unwrap();
        let rows = apply_weights(&dtm, &model).unwrap();
        for (i, (_, counts)) in docs.iter().enumerate() {
            let (vec, stats) = weight_external(counts, &model, &vocab).unwrap();
            assert_eq!(vec, rows[i]);
            assert_eq!(stats.dropped_count, 0);
            assert_eq!(stats.dropped_mass(), 0.0);
        }
    }

    #[test]
    fn out_of_vocabulary_mass_is_tracked() {
        let (docs, vocab) = two_doc_corpus();
        let dtm = build_dtm(&docs, vocab.clone()).unwrap();
        let model = fit_weights(&dtm, WeightingScheme::default()).unwrap();
        let external: TermCounts =
            [("rate".to_string(), 3), ("unicorn".to_string(), 7)].into_iter().collect();
        let (vec, stats) = weight_external(&external, &model, &vocab).unwrap();
        assert_eq!(vec.values, vec![0.0, 0.0, 3.0]);
        assert_eq!(stats.dropped_terms, 1);
        assert_eq!(stats.dropped_count, 7);
        assert_eq!(stats.total_count, 10);
        assert_eq!(stats.dropped_mass(), 0.7);
    }

    #[test]
    fn fully_out_of_vocabulary_document_yields_zero_vector() {
        let (docs, vocab) = two_doc_corpus();
        let dtm = build_dtm(&docs, vocab.clone()).unwrap();
        let model = fit_weights(&dtm, WeightingScheme::default()).unwrap();
        let external = count_terms(&["zeppelin", "zeppelin"]);
        let (vec, stats) = weight_external(&external, &model, &vocab).unwrap();
        assert!(vec.is_zero());
        assert_eq!(stats.dropped_mass(), 1.0);
    }

    #[test]
    fn mismatched_model_is_rejected() {
        let (docs, vocab) = two_doc_corpus();
        let dtm = build_dtm(&docs, vocab.clone()).unwrap();
        let model = fit_weights(&dtm, WeightingScheme::default()).unwrap();
        let other_docs = vec![("x".to_string(), count_terms(&["rate"]))];
        let other_vocab =
            Arc::new(build_vocabulary(&[count_terms(&["rate"])]).unwrap());
        let other_dtm = build_dtm(&other_docs, other_vocab.clone()).unwrap();
        assert!(matches!(
            apply_weights(&other_dtm, &model),
            Err(DtmError::VocabularyMismatch { expected: 1, got: 3 })
        ));
        assert!(matches!(
            weight_external(&other_docs[0].1, &model, &other_vocab),
            Err(DtmError::VocabularyMismatch { .. })
        ));
    }

    #[test]
    fn scheme_names_round_trip() {
        for name in ["raw-none", "raw-plain", "raw-smooth", "log-none", "log-plain", "log-smooth"]
        {
            let scheme: WeightingScheme = name.parse().unwrap();
            assert_eq!(scheme.to_string(), name);
        }
        assert!("tfidf".parse::<WeightingScheme>().is_err());
        assert!("raw-sqrt".parse::<WeightingScheme>().is_err());
        assert_eq!(WeightingScheme::default().to_string(), "raw-smooth");
    }

    proptest! {
        #[test]
        fn corpus_rows_and_external_weighting_agree(
            token_lists in proptest::collection::vec(
                proptest::collection::vec("[a-f]{1,3}", 1..12),
                1..6,
            ),
        ) {
            let docs: Vec<(String, TermCounts)> = token_lists
                .iter()
                .enumerate()
                .map(|(i, toks)| (format!("doc{i}"), count_terms(toks)))
                .collect();
            let counts: Vec<TermCounts> = docs.iter().map(|(_, c)| c.clone()).collect();
            let vocab = Arc::new(build_vocabulary(&counts).unwrap());
            let dtm = build_dtm(&docs, vocab.clone()).unwrap();
            for scheme in ["raw-smooth", "log-plain", "raw-none"] {
                let scheme: WeightingScheme = scheme.parse().unwrap();
                let model = fit_weights(&dtm, scheme).unwrap();
                let rows = apply_weights(&dtm, &model).unwrap();
                for (i, (_, c)) in docs.iter().enumerate() {
                    let (vec, stats) = weight_external(c, &model, &vocab).unwrap();
                    prop_assert_eq!(&vec, &rows[i]);
                    prop_assert_eq!(stats.dropped_count, 0);
                }
            }
        }

        #[test]
        fn smooth_idf_is_always_positive(n in 1usize..50, df_frac in 0.0f64..=1.0) {
            let df = ((n as f64) * df_frac).round() as usize;
            let idf = idf_value(IdfWeight::Smooth, n, df.min(n).max(1));
            prop_assert!(idf > 0.0);
        }
    }
}
