//! Narrative entities: detection, import, alias resolution and selection.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use crate::corpus::{normalize, Document, Span, Token};
use crate::error::{Error, Result};
use crate::graph::CooccurrenceGraph;

/// Lowercase words allowed between the parts of a multi-word name.
pub const CONNECTORS: &[&str] = &["de", "da", "do", "das", "dos", "e"];

// A word right after one of these starts a new clause (quoted speech,
// dialogue), so its capital letter says nothing about it being a name.
const CLAUSE_OPENERS: &[&str] = &["\"", "“", "«", "—", "–", ":"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntityMention {
    pub surface: String,
    pub span: Span,
    pub sentence_index: usize,
    /// Category tag from an external tagger (PER, ORG, LOC, MISC).
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub canonical: String,
    pub aliases: BTreeSet<String>,
    pub mentions: Vec<EntityMention>,
    pub reference_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Capitalized,
    Acronym,
    Connector,
    Other,
}

fn shape(token: &Token) -> Shape {
    if !token.is_word() {
        return Shape::Other;
    }
    if CONNECTORS.contains(&token.surface.as_str()) {
        return Shape::Connector;
    }
    let mut letters = token.surface.chars().filter(|c| c.is_alphabetic());
    let Some(first) = token.surface.chars().next().filter(|c| c.is_uppercase()) else {
        return Shape::Other;
    };
    let skipped = letters.next();
    debug_assert_eq!(skipped, Some(first));
    let rest: Vec<char> = letters.collect();
    if !rest.is_empty() && rest.iter().all(|c| c.is_uppercase()) {
        Shape::Acronym
    } else if rest.iter().all(|c| c.is_lowercase()) {
        Shape::Capitalized
    } else {
        Shape::Other
    }
}

/// Proper-noun heuristic over capitalization.
///
/// A mention is a maximal run of capitalized words (`Costa`) or acronyms of
/// two or more letters (`BES`), where single connectors (`de`, `da`, `do`,
/// `das`, `dos`, `e`) may join two name words. A capitalized word that opens
/// a sentence or a quoted/dialogue clause only counts when the same word
/// also appears capitalized mid-clause somewhere in the document, or is a
/// word of a gazetteer entry. Output is ordered by span start.
pub fn detect_proper_nouns(doc: &Document, gazetteer: Option<&HashSet<String>>) -> Vec<EntityMention> {
    let tokens = doc.tokens();
    let shapes: Vec<Shape> = tokens.iter().map(shape).collect();
    let initial: Vec<bool> = (0..tokens.len())
        .map(|i| {
            i == 0
                || tokens[i - 1].sentence_index != tokens[i].sentence_index
                || (!tokens[i - 1].is_word() && CLAUSE_OPENERS.contains(&tokens[i - 1].surface.as_str()))
        })
        .collect();

    let licensed: HashSet<&str> = tokens
        .iter()
        .zip(&shapes)
        .zip(&initial)
        .filter(|((_, s), &init)| !init && matches!(s, Shape::Capitalized | Shape::Acronym))
        .map(|((t, _), _)| t.normalized.as_str())
        .collect();
    let gazetteer_words: HashSet<String> = gazetteer
        .into_iter()
        .flatten()
        .flat_map(|entry| entry.split_whitespace().map(normalize).collect::<Vec<_>>())
        .collect();

    let is_name = |i: usize| match shapes[i] {
        Shape::Acronym => true,
        Shape::Capitalized => {
            !initial[i]
                || licensed.contains(tokens[i].normalized.as_str())
                || gazetteer_words.contains(&tokens[i].normalized)
        }
        _ => false,
    };
    let same_sentence = |a: usize, b: usize| tokens[a].sentence_index == tokens[b].sentence_index;

    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !is_name(i) {
            i += 1;
            continue;
        }
        let start = i;
        let mut end = i + 1;
        loop {
            if end < tokens.len() && same_sentence(start, end) && is_name(end) {
                end += 1;
            } else if end + 1 < tokens.len()
                && same_sentence(start, end + 1)
                && shapes[end] == Shape::Connector
                && is_name(end + 1)
            {
                end += 2;
            } else {
                break;
            }
        }
        let span = Span::new(tokens[start].span.start, tokens[end - 1].span.end);
        out.push(EntityMention {
            surface: doc.slice(span).to_owned(),
            span,
            sentence_index: tokens[start].sentence_index,
            label: None,
        });
        i = end;
    }
    out
}

#[derive(Debug, Deserialize)]
struct ImportRecord {
    surface: String,
    start: usize,
    end: usize,
    label: String,
    #[serde(default)]
    canonical: Option<String>,
}

/// Result of reading an external tagger's mention file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MentionImport {
    pub mentions: Vec<EntityMention>,
    /// Alias hints from records that carry a `canonical` different from the surface.
    pub aliases: AliasMap,
}

/// Reads and validates a mention-import file: a JSON array of
/// `{"surface", "start", "end", "label", "canonical"?}` objects with
/// character offsets into the document text.
pub fn import_mentions(bytes: &[u8], doc: &Document) -> Result<MentionImport> {
    let records: Vec<ImportRecord> =
        serde_json::from_slice(bytes).map_err(|e| Error::Schema(e.to_string()))?;
    let len = doc.char_len();
    let mut mentions = Vec::with_capacity(records.len());
    let mut hints = Vec::new();
    for (index, r) in records.into_iter().enumerate() {
        if r.start >= r.end {
            return Err(Error::Schema(format!(
                "record {index}: start {} must be less than end {}",
                r.start, r.end
            )));
        }
        let span = Span::new(r.start, r.end);
        let found = doc.get_slice(span).ok_or(Error::OutOfBounds {
            index,
            start: r.start,
            end: r.end,
            len,
        })?;
        if found != r.surface {
            return Err(Error::SpanMismatch {
                index,
                start: r.start,
                end: r.end,
                expected: r.surface,
                found: found.to_owned(),
            });
        }
        let sentence_index = doc.sentence_containing(span).ok_or(Error::CrossSentenceSpan {
            index,
            start: r.start,
            end: r.end,
        })?;
        if let Some(canonical) = r.canonical.filter(|c| *c != r.surface) {
            hints.push((r.surface.clone(), canonical));
        }
        mentions.push(EntityMention {
            surface: r.surface,
            span,
            sentence_index,
            label: Some(r.label),
        });
    }
    Ok(MentionImport {
        mentions: dedup_mentions(mentions),
        aliases: AliasMap::from_pairs(hints)?,
    })
}

/// Combines two mention lists, dropping exact duplicate spans (the first
/// occurrence wins, except that a labeled duplicate replaces an unlabeled one).
pub fn merge_mentions(first: Vec<EntityMention>, second: Vec<EntityMention>) -> Vec<EntityMention> {
    dedup_mentions(first.into_iter().chain(second).collect())
}

fn dedup_mentions(mentions: Vec<EntityMention>) -> Vec<EntityMention> {
    let mut by_span: BTreeMap<Span, EntityMention> = BTreeMap::new();
    for m in mentions {
        match by_span.get_mut(&m.span) {
            None => {
                by_span.insert(m.span, m);
            }
            Some(existing) if existing.label.is_none() && m.label.is_some() => *existing = m,
            Some(_) => {}
        }
    }
    by_span.into_values().collect()
}

/// Alias → canonical name. Every alias maps to exactly one canonical, and no
/// canonical is itself an alias of something else.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasMap {
    map: BTreeMap<String, String>,
}

impl AliasMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, A, C>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, C)>,
        A: Into<String>,
        C: Into<String>,
    {
        let mut out = AliasMap::new();
        for (alias, canonical) in pairs {
            out.insert(alias.into(), canonical.into())?;
        }
        out.check_chains()?;
        Ok(out)
    }

    /// Parses a JSON object `{"alias": "canonical", ...}`. Repeated keys with
    /// different values are a conflict, not an overwrite.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let pairs: PairList = serde_json::from_slice(bytes)
            .map_err(|e| Error::Config(format!("alias map: {e}")))?;
        Self::from_pairs(pairs.0)
    }

    fn insert(&mut self, alias: String, canonical: String) -> Result<()> {
        if alias == canonical {
            return Ok(());
        }
        match self.map.get(&alias) {
            Some(existing) if *existing != canonical => Err(Error::ConflictingAlias {
                alias,
                first: existing.clone(),
                second: canonical,
            }),
            Some(_) => Ok(()),
            None => {
                self.map.insert(alias, canonical);
                Ok(())
            }
        }
    }

    fn check_chains(&self) -> Result<()> {
        for canonical in self.map.values() {
            if let Some(next) = self.map.get(canonical) {
                return Err(Error::ConflictingAlias {
                    alias: canonical.clone(),
                    first: canonical.clone(),
                    second: next.clone(),
                });
            }
        }
        Ok(())
    }

    /// Adds every pair of `other`; conflicts are errors.
    pub fn extend(&mut self, other: &AliasMap) -> Result<()> {
        for (a, c) in &other.map {
            self.insert(a.clone(), c.clone())?;
        }
        self.check_chains()
    }

    pub fn canonical<'a>(&'a self, surface: &'a str) -> &'a str {
        self.map.get(surface).map_or(surface, String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(a, c)| (a.as_str(), c.as_str()))
    }
}

struct PairList(Vec<(String, String)>);

impl<'de> Deserialize<'de> for PairList {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PairVisitor;
        impl<'de> Visitor<'de> for PairVisitor {
            type Value = PairList;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping alias to canonical name")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut map: M) -> std::result::Result<PairList, M::Error> {
                let mut pairs = Vec::new();
                while let Some(pair) = map.next_entry::<String, String>()? {
                    pairs.push(pair);
                }
                Ok(PairList(pairs))
            }
        }
        deserializer.deserialize_map(PairVisitor)
    }
}

/// Groups mentions into entities by canonical name. Surfaces missing from
/// the map are their own canonical. Output is ordered by canonical name.
pub fn resolve_aliases(mentions: &[EntityMention], aliases: &AliasMap) -> Vec<Entity> {
    let mut groups: BTreeMap<&str, Entity> = BTreeMap::new();
    for m in mentions {
        let canonical = aliases.canonical(&m.surface);
        let entity = groups.entry(canonical).or_insert_with(|| Entity {
            canonical: canonical.to_owned(),
            aliases: BTreeSet::from([canonical.to_owned()]),
            mentions: Vec::new(),
            reference_count: 0,
        });
        entity.aliases.insert(m.surface.clone());
        entity.mentions.push(m.clone());
        entity.reference_count += 1;
    }
    groups
        .into_values()
        .map(|mut e| {
            e.mentions.sort_by_key(|m| m.span);
            e
        })
        .collect()
}

/// Aliases that fold a one-word entity into the only multi-word entity
/// ending in that word ("Salgado" → "Ricardo Salgado"). Ambiguous surnames
/// are left alone.
pub fn surname_aliases(entities: &[Entity]) -> AliasMap {
    let mut by_last: HashMap<&str, Vec<&str>> = HashMap::new();
    for e in entities {
        let words: Vec<&str> = e.canonical.split_whitespace().collect();
        if words.len() > 1 {
            by_last.entry(words[words.len() - 1]).or_default().push(&e.canonical);
        }
    }
    let mut map = AliasMap::new();
    for e in entities {
        if e.canonical.split_whitespace().count() != 1 {
            continue;
        }
        if let Some([only]) = by_last.get(e.canonical.as_str()).map(Vec::as_slice) {
            // Single-word keys never collide and multi-word targets are never keys.
            map.map.insert(e.canonical.clone(), (*only).to_owned());
        }
    }
    map
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionThresholds {
    pub min_refs: usize,
    pub min_interactions: usize,
    pub top_n: usize,
}

impl Default for SelectionThresholds {
    fn default() -> Self {
        SelectionThresholds {
            min_refs: 3,
            min_interactions: 1,
            top_n: 40,
        }
    }
}

/// Distinct co-occurrence partners of every node in a preview graph, by canonical name.
pub fn interaction_counts(preview: &CooccurrenceGraph) -> HashMap<&str, usize> {
    preview
        .nodes()
        .iter()
        .map(|n| (n.label.as_str(), preview.neighbors(n.id).count()))
        .collect()
}

/// Keeps entities with enough references and enough distinct co-occurrence
/// partners (counted in `preview`, a graph over all candidates), then the
/// `top_n` most referenced. Ties go to the alphabetically first canonical
/// name; output is by descending reference count.
pub fn select_entities(
    entities: Vec<Entity>,
    preview: &CooccurrenceGraph,
    thresholds: SelectionThresholds,
) -> Result<Vec<Entity>> {
    let partners = interaction_counts(preview);
    let mut kept: Vec<Entity> = entities
        .into_iter()
        .filter(|e| {
            e.reference_count >= thresholds.min_refs
                && partners.get(e.canonical.as_str()).copied().unwrap_or(0) >= thresholds.min_interactions
        })
        .collect();
    kept.sort_by(|a, b| {
        b.reference_count
            .cmp(&a.reference_count)
            .then_with(|| a.canonical.cmp(&b.canonical))
    });
    kept.truncate(thresholds.top_n);
    if kept.is_empty() {
        return Err(Error::EmptySelection {
            min_refs: thresholds.min_refs,
            min_interactions: thresholds.min_interactions,
        });
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::load_document;
    use crate::graph::{build_cooccurrence_graph, CooccurrenceUnit};

    fn detect(text: &str) -> Vec<String> {
        let doc = load_document(text.as_bytes(), 1).unwrap();
        detect_proper_nouns(&doc, None).into_iter().map(|m| m.surface).collect()
    }

    fn mention(doc: &Document, surface: &str, nth: usize) -> EntityMention {
        let byte = doc.text().match_indices(surface).nth(nth).unwrap().0;
        let start = doc.text()[..byte].chars().count();
        let span = Span::new(start, start + surface.chars().count());
        EntityMention {
            surface: surface.to_owned(),
            span,
            sentence_index: doc.sentence_containing(span).unwrap(),
            label: None,
        }
    }

    #[test]
    fn heuristic_rules() {
        assert_eq!(
            detect("Ontem, Carlos Costa reuniu com Ricardo Salgado."),
            vec!["Carlos Costa", "Ricardo Salgado"]
        );
        assert_eq!(
            detect("O Banco de Portugal interveio no BES."),
            vec!["Banco de Portugal", "BES"]
        );
        assert!(detect("Ele disse que sim.").is_empty());
        // a connector never starts or ends a run
        assert_eq!(detect("Falou de Lisboa de manhã."), vec!["Lisboa"]);
        assert_eq!(detect("Viu a Isabel dos Santos."), vec!["Isabel dos Santos"]);
    }

    #[test]
    fn sentence_initial_needs_license() {
        assert_eq!(
            detect("Salgado saiu. Depois chegou Salgado."),
            vec!["Salgado", "Salgado"]
        );
        assert_eq!(detect("Depois chegou Costa."), vec!["Costa"]);
        let doc = load_document("Salgado saiu.".as_bytes(), 1).unwrap();
        assert!(detect_proper_nouns(&doc, None).is_empty());
        let gaz: HashSet<String> = ["Ricardo Salgado".to_string()].into();
        let found = detect_proper_nouns(&doc, Some(&gaz));
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].surface, "Salgado");
        // acronyms need no license
        assert_eq!(detect("BES caiu."), vec!["BES"]);
    }

    #[test]
    fn quoted_clause_start_is_initial() {
        assert_eq!(detect("Ele disse: \"Vamos embora.\""), Vec::<String>::new());
        assert_eq!(detect("— Quem manda é o Governador."), vec!["Governador"]);
    }

    #[test]
    fn mixed_case_is_not_a_name() {
        assert!(detect("Usou o iPhone e o McDonald.").is_empty());
    }

    #[test]
    fn import_valid_and_invalid() {
        let doc = load_document("O BES caiu. Carlos Costa falou.".as_bytes(), 1).unwrap();
        let ok = br#"[{"surface":"BES","start":2,"end":5,"label":"ORG"},
                     {"surface":"Carlos Costa","start":12,"end":24,"label":"PER","canonical":"Costa"}]"#;
        let got = import_mentions(ok, &doc).unwrap();
        assert_eq!(got.mentions.len(), 2);
        assert_eq!(got.mentions[1].sentence_index, 1);
        assert_eq!(got.mentions[0].label.as_deref(), Some("ORG"));
        assert_eq!(got.aliases.canonical("Carlos Costa"), "Costa");

        let bad = br#"[{"surface":"BES","start":2,"end":5,"label":"ORG"},
                      {"surface":"BPI","start":2,"end":5,"label":"ORG"}]"#;
        match import_mentions(bad, &doc) {
            Err(Error::SpanMismatch { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
        let oob = br#"[{"surface":"x","start":40,"end":41,"label":"ORG"}]"#;
        assert!(matches!(import_mentions(oob, &doc), Err(Error::OutOfBounds { index: 0, .. })));
        let cross = br#"[{"surface":"caiu. Carlos","start":6,"end":18,"label":"ORG"}]"#;
        assert!(matches!(import_mentions(cross, &doc), Err(Error::CrossSentenceSpan { .. })));
        assert!(matches!(import_mentions(b"{}", &doc), Err(Error::Schema(_))));
        assert!(matches!(
            import_mentions(br#"[{"surface":"BES","start":2,"end":5}]"#, &doc),
            Err(Error::Schema(_))
        ));
        assert!(import_mentions(b"[]", &doc).unwrap().mentions.is_empty());
    }

    #[test]
    fn merge_dedups_spans() {
        let doc = load_document("O BES caiu.".as_bytes(), 1).unwrap();
        let heuristic = detect_proper_nouns(&doc, None);
        let mut labeled = heuristic.clone();
        labeled[0].label = Some("ORG".into());
        let merged = merge_mentions(heuristic, labeled);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].label.as_deref(), Some("ORG"));
    }

    #[test]
    fn alias_resolution() {
        let doc = load_document("Salgado riu. Salgado saiu. Ricardo Salgado voltou.".as_bytes(), 1).unwrap();
        let mentions = vec![
            mention(&doc, "Salgado", 0),
            mention(&doc, "Salgado", 1),
            mention(&doc, "Ricardo Salgado", 0),
        ];
        let map = AliasMap::from_pairs([("Salgado", "Ricardo Salgado")]).unwrap();
        let entities = resolve_aliases(&mentions, &map);
        assert_eq!(entities.len(), 1);
        assert_eq!(entities[0].canonical, "Ricardo Salgado");
        assert_eq!(entities[0].reference_count, 3);
        assert!(entities[0].aliases.contains("Salgado"));

        let plain = resolve_aliases(&mentions, &AliasMap::new());
        assert_eq!(plain.len(), 2);
        assert_eq!(plain.iter().map(|e| e.reference_count).sum::<usize>(), 3);

        assert_eq!(surname_aliases(&plain).canonical("Salgado"), "Ricardo Salgado");
    }

    #[test]
    fn alias_conflicts() {
        assert!(matches!(
            AliasMap::from_pairs([("X", "A"), ("X", "B")]),
            Err(Error::ConflictingAlias { .. })
        ));
        assert!(AliasMap::from_pairs([("X", "A"), ("X", "A")]).is_ok());
        assert!(matches!(
            AliasMap::from_pairs([("X", "A"), ("A", "B")]),
            Err(Error::ConflictingAlias { .. })
        ));
        assert!(matches!(
            AliasMap::from_json(br#"{"X": "A", "X": "B"}"#),
            Err(Error::ConflictingAlias { .. })
        ));
        let map = AliasMap::from_json(br#"{"Costa": "Carlos Costa"}"#).unwrap();
        assert_eq!(map.canonical("Costa"), "Carlos Costa");
        assert_eq!(map.canonical("BES"), "BES");
        assert!(matches!(AliasMap::from_json(b"[1]"), Err(Error::Config(_))));
    }

    #[test]
    fn surname_merge_skips_ambiguous() {
        let doc = load_document("Costa. António Costa. Carlos Costa.".as_bytes(), 1).unwrap();
        let mentions = vec![
            mention(&doc, "Costa", 0),
            mention(&doc, "António Costa", 0),
            mention(&doc, "Carlos Costa", 0),
        ];
        let entities = resolve_aliases(&mentions, &AliasMap::new());
        assert!(surname_aliases(&entities).is_empty());
    }

    fn selection_fixture() -> (Vec<Entity>, CooccurrenceGraph) {
        // A:6, B:4, C:3 co-occur; D:4 never shares a sentence; E:1 meets A once.
        let text = "A B C. A B C. A B C. A B. A. D. D. D. D. A E.";
        let doc = load_document(text.as_bytes(), 1).unwrap();
        let mut mentions = Vec::new();
        for (name, count) in [("A", 6), ("B", 4), ("C", 3), ("D", 4), ("E", 1)] {
            for nth in 0..count {
                mentions.push(mention(&doc, name, nth));
            }
        }
        let entities = resolve_aliases(&mentions, &AliasMap::new());
        let preview = build_cooccurrence_graph(&entities, &doc, CooccurrenceUnit::Sentence);
        (entities, preview)
    }

    #[test]
    fn selection_thresholds() {
        let (entities, preview) = selection_fixture();
        let t = SelectionThresholds { min_refs: 2, min_interactions: 0, top_n: 10 };
        let names: Vec<String> = select_entities(entities.clone(), &preview, t)
            .unwrap()
            .into_iter()
            .map(|e| e.canonical)
            .collect();
        assert_eq!(names, vec!["A", "B", "D", "C"]);

        let t = SelectionThresholds { min_refs: 1, min_interactions: 1, top_n: 10 };
        let names: Vec<String> = select_entities(entities.clone(), &preview, t)
            .unwrap()
            .into_iter()
            .map(|e| e.canonical)
            .collect();
        assert_eq!(names, vec!["A", "B", "C", "E"]);

        let t = SelectionThresholds { min_refs: 99, min_interactions: 0, top_n: 10 };
        assert!(matches!(
            select_entities(entities, &preview, t),
            Err(Error::EmptySelection { .. })
        ));
    }

    #[test]
    fn selection_tie_break() {
        let text = "A B C. A B C. A B C. A. A.";
        let doc = load_document(text.as_bytes(), 1).unwrap();
        let mut mentions = Vec::new();
        for (name, count) in [("A", 5), ("C", 3), ("B", 3)] {
            for nth in 0..count {
                mentions.push(mention(&doc, name, nth));
            }
        }
        let entities = resolve_aliases(&mentions, &AliasMap::new());
        let preview = build_cooccurrence_graph(&entities, &doc, CooccurrenceUnit::Sentence);
        let t = SelectionThresholds { min_refs: 1, min_interactions: 0, top_n: 2 };
        let names: Vec<String> = select_entities(entities, &preview, t)
            .unwrap()
            .into_iter()
            .map(|e| e.canonical)
            .collect();
        assert_eq!(names, vec!["A", "B"]);
    }
}
