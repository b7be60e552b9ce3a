//! Plain-text corpus layouts.
//!
//! Every layout is UTF-8, one comma-separated record per line, no header.
//! Blank lines and lines starting with `#` are skipped, so files written by
//! this crate (which carry a `#` provenance header) load back unchanged.
//! LF and CRLF line endings are both accepted.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use tailfit_core::dataset::{Event, YEAR_RANGE};
use tailfit_core::{AuthorCounts, CountSample, EventLog};

/// On-disk record layouts. There is no auto-detection: a wrong guess
/// between the two count layouts would silently produce a different sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// `author_id,count`
    PerAuthor,
    /// `value,multiplicity`
    ValueMult,
    /// `author_id,year`, one row per publication
    Events,
}

impl Layout {
    pub fn name(self) -> &'static str {
        match self {
            Layout::PerAuthor => "per-author",
            Layout::ValueMult => "value-mult",
            Layout::Events => "events",
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "per-author" => Ok(Layout::PerAuthor),
            "value-mult" => Ok(Layout::ValueMult),
            "events" => Ok(Layout::Events),
            _ => Err(format!("unknown layout '{s}' (expected per-author, value-mult or events)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("input contains no records")]
    Empty,
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Model(#[from] tailfit_core::Error),
}

fn parse_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// Calls `f(line_number, first, second)` for every record.
fn for_each_record<R, F>(mut reader: R, mut f: F) -> Result<usize, FormatError>
where
    R: BufRead,
    F: FnMut(usize, &str, &str) -> Result<(), FormatError>,
{
    let mut buf = Vec::new();
    let mut line_no = 0;
    let mut records = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let text = std::str::from_utf8(&buf).map_err(|_| parse_error(line_no, "not valid UTF-8"))?;
        let text = text.trim_end_matches(['\n', '\r']);
        if text.trim().is_empty() || text.starts_with('#') {
            continue;
        }
        let mut fields = text.split(',');
        let (Some(first), Some(second), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_error(line_no, format!("expected two comma-separated fields, got '{text}'")));
        };
        f(line_no, first.trim(), second.trim())?;
        records += 1;
    }
    if records == 0 {
        return Err(FormatError::Empty);
    }
    Ok(records)
}

fn parse_author(line: usize, field: &str) -> Result<String, FormatError> {
    if field.is_empty() {
        return Err(parse_error(line, "blank author id"));
    }
    Ok(field.to_owned())
}

fn parse_positive(line: usize, field: &str, what: &str) -> Result<u64, FormatError> {
    match field.parse::<u64>() {
        Ok(0) => Err(parse_error(line, format!("{what} must be positive, got 0"))),
        Ok(v) => Ok(v),
        Err(_) => Err(parse_error(line, format!("{what} must be a positive integer, got '{field}'"))),
    }
}

/// Per-author counts from the `author_id,count` layout. Duplicate ids are
/// rejected.
pub fn load_author_counts<R: BufRead>(reader: R) -> Result<AuthorCounts, FormatError> {
    let mut authors = AuthorCounts::new();
    for_each_record(reader, |line, author, count| {
        let author = parse_author(line, author)?;
        let count = parse_positive(line, count, "count")?;
        match authors.entry(author) {
            Entry::Occupied(e) => Err(parse_error(line, format!("duplicate author id '{}'", e.key()))),
            Entry::Vacant(e) => {
                e.insert(count);
                Ok(())
            }
        }
    })?;
    Ok(authors)
}

/// A count sample in either count layout. The events layout is rejected
/// here; aggregate an [`EventLog`] instead.
pub fn load_counts<R: BufRead>(reader: R, layout: Layout, label: &str) -> Result<CountSample, FormatError> {
    match layout {
        Layout::PerAuthor => Ok(CountSample::from_author_counts(&load_author_counts(reader)?, label)?),
        Layout::ValueMult => {
            let mut counts = BTreeMap::new();
            for_each_record(reader, |line, value, mult| {
                let value = parse_positive(line, value, "value")?;
                let mult = parse_positive(line, mult, "multiplicity")?;
                if counts.insert(value, mult).is_some() {
                    return Err(parse_error(line, format!("value {value} listed twice")));
                }
                Ok(())
            })?;
            Ok(CountSample::from_multiplicities(counts, label)?)
        }
        Layout::Events => Err(FormatError::Model(tailfit_core::Error::Domain(
            "the events layout holds publication events, not counts".into(),
        ))),
    }
}

/// Publication events from the `author_id,year` layout. Repeated rows are
/// separate publications.
pub fn load_events<R: BufRead>(reader: R, label: &str) -> Result<EventLog, FormatError> {
    let mut events = Vec::new();
    for_each_record(reader, |line, author, year| {
        let author = parse_author(line, author)?;
        let year: i32 = year
            .parse()
            .map_err(|_| parse_error(line, format!("year must be an integer, got '{year}'")))?;
        if !(YEAR_RANGE.0..=YEAR_RANGE.1).contains(&year) {
            return Err(parse_error(
                line,
                format!("year {year} outside {}..={}", YEAR_RANGE.0, YEAR_RANGE.1),
            ));
        }
        events.push(Event { author, year });
        Ok(())
    })?;
    Ok(EventLog::new(events, label)?)
}

/// Writes `# ` followed by each header line, then `value,multiplicity` rows.
pub fn write_value_mult<W: Write>(mut out: W, header: &[String], data: &CountSample) -> io::Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    for (value, mult) in data.iter() {
        writeln!(out, "{value},{mult}")?;
    }
    Ok(())
}
