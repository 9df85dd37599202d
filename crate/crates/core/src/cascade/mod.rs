//! Cascade event model, social network, fixed-size windows and window graphs.

mod social;
mod window;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use social::{build_social_network, SocialNetwork};
pub use window::{build_window_graph, segment, EdgeOrigin, Window, WindowGraph};

/// One reshare: `target` adopted the content from `source` at `time` seconds
/// after the first posting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReshareEvent {
    pub source: String,
    pub target: String,
    pub time: f64,
}

/// The time-ordered reshare sequence of one microblog.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cascade {
    id: String,
    root: String,
    events: Vec<ReshareEvent>,
    duration: f64,
}

impl Cascade {
    pub fn id(&self) -> &str {
        &self.id
    }

    /// The original poster, activated at time 0.
    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn events(&self) -> &[ReshareEvent] {
        &self.events
    }

    /// Time of the last retained event.
    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn event_times(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.time).collect()
    }

    /// Number of activated users: the root plus every retained target.
    pub fn activation_count(&self) -> usize {
        self.events.len() + 1
    }

    /// Users in activation order with their activation times.
    pub fn activations(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        std::iter::once((self.root.as_str(), 0.0))
            .chain(self.events.iter().map(|e| (e.target.as_str(), e.time)))
    }
}

/// Normalises raw `(source, target, time)` records into a [`Cascade`].
///
/// Events are sorted by `(time, source, target)` so the result does not depend
/// on input order, times are shifted so the earliest is 0, self-loops are
/// dropped, and a user is activated only by its first reshare. The source of
/// the earliest event is the original poster.
pub fn ingest_cascade<S, I>(id: impl Into<String>, raw_events: I) -> Result<Cascade>
where
    S: Into<String>,
    I: IntoIterator<Item = (S, S, f64)>,
{
    let mut events = Vec::new();
    for (source, target, time) in raw_events {
        if !time.is_finite() {
            return Err(Error::InvalidTime(time));
        }
        let (source, target) = (source.into(), target.into());
        if source != target {
            events.push(ReshareEvent {
                source,
                target,
                time,
            });
        }
    }
    if events.is_empty() {
        return Err(Error::EmptyCascade);
    }
    events.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then_with(|| a.source.cmp(&b.source))
            .then_with(|| a.target.cmp(&b.target))
    });
    let origin = events[0].time;
    let root = events[0].source.clone();

    let mut activated: HashSet<String> = HashSet::from([root.clone()]);
    events.retain(|e| activated.insert(e.target.clone()));
    for e in &mut events {
        e.time -= origin;
    }
    let duration = events.last().map_or(0.0, |e| e.time);
    Ok(Cascade {
        id: id.into(),
        root,
        events,
        duration,
    })
}
