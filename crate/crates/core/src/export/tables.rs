use std::collections::HashMap;

use crate::corpus::{Document, FrequencyTable, Span, TrendSeries};
use crate::entities::{Entity, EntityMention};
use crate::error::{Error, Result};
use crate::factors::{ClusterAssignment, FactorModel};
use crate::graph::{CentralityScores, CommunityAssignment, CooccurrenceGraph};

fn write_rows<I, R>(header: &[String], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

/// `term,count`, by descending count then ascending term; `top` limits the rows.
pub fn frequency_csv(table: &FrequencyTable, top: Option<usize>) -> Result<Vec<u8>> {
    let ranked = match top {
        Some(n) => table.top(n),
        None => table.ranked(),
    };
    write_rows(
        &header(&["term", "count"]),
        ranked.into_iter().map(|(t, c)| [t.to_owned(), c.to_string()]),
    )
}

/// One row per term: `term,total,s1..sS`.
pub fn trend_csv(series: &TrendSeries) -> Result<Vec<u8>> {
    let mut cols = header(&["term", "total"]);
    cols.extend((1..=series.segment_count).map(|s| format!("s{s}")));
    write_rows(
        &cols,
        series.terms.iter().enumerate().map(|(t, term)| {
            let mut row = vec![term.clone(), series.row_total(t).to_string()];
            row.extend(series.counts[t].iter().map(|c| c.to_string()));
            row
        }),
    )
}

fn format_mention(m: &EntityMention) -> String {
    match &m.label {
        Some(label) => format!("{}:{}:{label}", m.span.start, m.span.end),
        None => format!("{}:{}", m.span.start, m.span.end),
    }
}

/// Selected entities in rank order. Aliases are joined by `|`, mentions are
/// space-separated `start:end[:label]` character spans.
pub fn entities_csv(entities: &[Entity], interactions: &HashMap<&str, usize>) -> Result<Vec<u8>> {
    write_rows(
        &header(&["id", "canonical", "reference_count", "interactions", "aliases", "mentions"]),
        entities.iter().enumerate().map(|(id, e)| {
            [
                id.to_string(),
                e.canonical.clone(),
                e.reference_count.to_string(),
                interactions.get(e.canonical.as_str()).copied().unwrap_or(0).to_string(),
                e.aliases.iter().cloned().collect::<Vec<_>>().join("|"),
                e.mentions.iter().map(format_mention).collect::<Vec<_>>().join(" "),
            ]
        }),
    )
}

/// Rebuilds the entities written by [`entities_csv`], re-reading mention
/// surfaces from `doc`.
pub fn parse_entities_csv(bytes: &[u8], doc: &Document) -> Result<Vec<Entity>> {
    let bad = |row: usize, what: String| Error::Schema(format!("entities row {row}: {what}"));
    let mut reader = csv::ReaderBuilder::new().from_reader(bytes);
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("entities table has no {name:?} column")))
    };
    let (c_canonical, c_aliases, c_mentions) = (col("canonical")?, col("aliases")?, col("mentions")?);

    let mut entities = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let field = |c: usize| record.get(c).unwrap_or("");
        let mut mentions = Vec::new();
        for item in field(c_mentions).split_whitespace() {
            let mut parts = item.splitn(3, ':');
            let mut offset = || -> Result<usize> {
                parts
                    .next()
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| bad(row, format!("bad mention {item:?}")))
            };
            let span = Span::new(offset()?, offset()?);
            let label = parts.next().map(str::to_owned);
            let surface = doc
                .get_slice(span)
                .filter(|_| span.start < span.end)
                .ok_or_else(|| bad(row, format!("span {span} is outside the text")))?;
            let sentence_index = doc
                .sentence_containing(span)
                .ok_or_else(|| bad(row, format!("span {span} crosses a sentence boundary")))?;
            mentions.push(EntityMention {
                surface: surface.to_owned(),
                span,
                sentence_index,
                label,
            });
        }
        let aliases = field(c_aliases)
            .split('|')
            .filter(|a| !a.is_empty())
            .map(str::to_owned)
            .collect();
        entities.push(Entity {
            canonical: field(c_canonical).to_owned(),
            aliases,
            reference_count: mentions.len(),
            mentions,
        });
    }
    Ok(entities)
}

/// `id,label,betweenness` by ascending node id.
pub fn centrality_csv(g: &CooccurrenceGraph, scores: &CentralityScores) -> Result<Vec<u8>> {
    write_rows(
        &header(&["id", "label", "betweenness"]),
        g.nodes()
            .iter()
            .map(|n| [n.id.to_string(), n.label.clone(), scores.scores[n.id].to_string()]),
    )
}

/// `id,label,community` by ascending node id.
pub fn communities_csv(g: &CooccurrenceGraph, communities: &CommunityAssignment) -> Result<Vec<u8>> {
    write_rows(
        &header(&["id", "label", "community"]),
        g.nodes()
            .iter()
            .map(|n| [n.id.to_string(), n.label.clone(), communities.membership[n.id].to_string()]),
    )
}

/// Component scores: `id,label,factor_1..factor_k`.
pub fn factors_csv(model: &FactorModel) -> Result<Vec<u8>> {
    let mut cols = header(&["id", "label"]);
    cols.extend((1..=model.components()).map(|j| format!("factor_{j}")));
    write_rows(
        &cols,
        model.row_labels.iter().enumerate().map(|(i, label)| {
            let mut row = vec![i.to_string(), label.clone()];
            row.extend(model.scores.row(i).iter().map(|x| x.to_string()));
            row
        }),
    )
}

/// `id,label,cluster` in row order.
pub fn clusters_csv(labels: &[String], clusters: &ClusterAssignment) -> Result<Vec<u8>> {
    write_rows(
        &header(&["id", "label", "cluster"]),
        labels
            .iter()
            .zip(&clusters.labels)
            .enumerate()
            .map(|(i, (label, c))| [i.to_string(), label.clone(), c.to_string()]),
    )
}
