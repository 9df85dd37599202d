use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cascade::{ingest_cascade, Cascade, SocialNetwork};
use crate::error::{Error, Result};

/// One `cascade_id,source,target,time` record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawEvent {
    pub cascade_id: String,
    pub source: String,
    pub target: String,
    pub time: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    JsonLines,
}

impl InputFormat {
    /// `.jsonl`, `.ndjson` and `.json` are JSON lines; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson" | "json") => InputFormat::JsonLines,
            _ => InputFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub records: usize,
    pub malformed_records: usize,
    pub cascades: usize,
    /// Cascades left with no event after self-loops were removed.
    pub empty_cascades: usize,
}

fn parse_time(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|t| t.is_finite())
}

/// Reads CSV records; a first line whose time field is not a number is
/// taken as a header. Short, long or unparsable records are counted and
/// skipped.
pub fn read_csv_events(reader: impl Read) -> Result<(Vec<RawEvent>, usize)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut events = Vec::new();
    let mut malformed = 0;
    for (i, record) in rdr.records().enumerate() {
        let record = match record {
            Ok(r) => r,
            Err(e) if e.is_io_error() => return Err(e.into()),
            Err(_) => {
                malformed += 1;
                continue;
            }
        };
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let time = (record.len() == 4)
            .then(|| parse_time(&record[3]))
            .flatten();
        match time {
            Some(time)
                if !record[0].is_empty() && !record[1].is_empty() && !record[2].is_empty() =>
            {
                events.push(RawEvent {
                    cascade_id: record[0].to_string(),
                    source: record[1].to_string(),
                    target: record[2].to_string(),
                    time,
                })
            }
            _ if i == 0 && record.len() == 4 => {}
            _ => malformed += 1,
        }
    }
    Ok((events, malformed))
}

fn id_field(v: Option<&Value>) -> Option<String> {
    match v? {
        Value::String(s) if !s.is_empty() => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Reads `{"cascade": .., "src": .., "dst": .., "t": ..}` lines. Ids may be
/// strings or numbers; `t` may be a number or a numeric string.
pub fn read_jsonl_events(reader: impl BufRead) -> Result<(Vec<RawEvent>, usize)> {
    let mut events = Vec::new();
    let mut malformed = 0;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Value>(&line).ok().and_then(|v| {
            let time = match v.get("t")? {
                Value::Number(n) => n.as_f64().filter(|t| t.is_finite()),
                Value::String(s) => parse_time(s),
                _ => None,
            }?;
            Some(RawEvent {
                cascade_id: id_field(v.get("cascade"))?,
                source: id_field(v.get("src"))?,
                target: id_field(v.get("dst"))?,
                time,
            })
        });
        match parsed {
            Some(e) => events.push(e),
            None => malformed += 1,
        }
    }
    Ok((events, malformed))
}

/// Groups records by cascade id and ingests each group; cascades come back
/// sorted by id.
pub fn group_cascades(events: Vec<RawEvent>) -> (Vec<Cascade>, usize) {
    let mut groups: BTreeMap<String, Vec<(String, String, f64)>> = BTreeMap::new();
    for e in events {
        groups
            .entry(e.cascade_id)
            .or_default()
            .push((e.source, e.target, e.time));
    }
    let mut empty = 0;
    let cascades = groups
        .into_iter()
        .filter_map(|(id, raw)| match ingest_cascade(id, raw) {
            Ok(c) => Some(c),
            Err(_) => {
                empty += 1;
                None
            }
        })
        .collect();
    (cascades, empty)
}

pub fn read_cascades(path: &Path) -> Result<(Vec<Cascade>, IngestSummary)> {
    let file = File::open(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        msg: e.to_string(),
    })?;
    let (events, malformed) = match InputFormat::from_path(path) {
        InputFormat::Csv => read_csv_events(BufReader::new(file))?,
        InputFormat::JsonLines => read_jsonl_events(BufReader::new(file))?,
    };
    let records = events.len();
    let (cascades, empty) = group_cascades(events);
    if malformed > 0 {
        log::warn!("{}: skipped {malformed} malformed records", path.display());
    }
    let summary = IngestSummary {
        records,
        malformed_records: malformed,
        cascades: cascades.len(),
        empty_cascades: empty,
    };
    Ok((cascades, summary))
}

/// Reads a whitespace-separated `u v` edge file, returning the network and
/// the number of malformed lines.
pub fn read_social(path: &Path) -> Result<(SocialNetwork, usize)> {
    let file = File::open(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        msg: e.to_string(),
    })?;
    let (net, malformed) = SocialNetwork::from_reader(BufReader::new(file))?;
    if malformed > 0 {
        log::warn!("{}: skipped {malformed} malformed lines", path.display());
    }
    Ok((net, malformed))
}

pub fn write_events_csv(writer: impl Write, events: &[RawEvent]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for e in events {
        w.serialize(e)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_social(mut writer: impl Write, edges: &[(String, String)]) -> Result<()> {
    for (u, v) in edges {
        writeln!(writer, "{u} {v}")?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_header_and_junk() {
        let text = "cascade_id,source,target,time\nc1,a,b,5\nc1,a,c,7\nc2,x,y\nc2,x,y,abc\nc2,x,y,1.5\n\nc1,b,d,9,extra\n";
        let (events, bad) = read_csv_events(text.as_bytes()).unwrap();
        assert_eq!(events.len(), 3);
        assert_eq!(bad, 3);
        let (cascades, empty) = group_cascades(events);
        assert_eq!(empty, 0);
        assert_eq!(
            cascades.iter().map(|c| c.id()).collect::<Vec<_>>(),
            ["c1", "c2"]
        );
        assert_eq!(cascades[0].event_times(), vec![0.0, 2.0]);
    }

    #[test]
    fn csv_without_header() {
        let (events, bad) = read_csv_events("c,a,b,0\nc,b,c,1e3\n".as_bytes()).unwrap();
        assert_eq!((events.len(), bad), (2, 0));
        assert_eq!(events[1].time, 1000.0);
    }

    #[test]
    fn jsonl_records() {
        let text = r#"{"cascade": 7, "src": "a", "dst": "b", "t": 3}
{"cascade": "7", "src": "b", "dst": "c", "t": "4.5"}
{"cascade": "7", "src": "b", "t": 5}
not json

{"cascade": "8", "src": "u", "dst": "u", "t": 1}
"#;
        let (events, bad) = read_jsonl_events(text.as_bytes()).unwrap();
        assert_eq!((events.len(), bad), (3, 2));
        let (cascades, empty) = group_cascades(events);
        assert_eq!((cascades.len(), empty), (1, 1));
        assert_eq!(cascades[0].activation_count(), 3);
    }

    #[test]
    fn csv_round_trip() {
        let events = vec![
            RawEvent {
                cascade_id: "c".into(),
                source: "a".into(),
                target: "b".into(),
                time: 0.1 + 0.2,
            },
            RawEvent {
                cascade_id: "c".into(),
                source: "b".into(),
                target: "c".into(),
                time: 1e-300,
            },
        ];
        let mut buf = Vec::new();
        write_events_csv(&mut buf, &events).unwrap();
        let (back, bad) = read_csv_events(buf.as_slice()).unwrap();
        assert_eq!(bad, 0);
        assert_eq!(back, events);
    }

    #[test]
    fn format_by_extension() {
        assert_eq!(
            InputFormat::from_path(Path::new("a/b.jsonl")),
            InputFormat::JsonLines
        );
        assert_eq!(
            InputFormat::from_path(Path::new("a/b.csv")),
            InputFormat::Csv
        );
        assert_eq!(InputFormat::from_path(Path::new("a/b")), InputFormat::Csv);
    }
}
