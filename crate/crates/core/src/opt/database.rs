// SPDX-License-Identifier: Apache-2.0

//! Database of AND-optimal XAG templates, one per 4-input NPN class.
//!
//! On-disk format (UTF-8, LF line endings), one class per line after the
//! header:
//!
//! ```text
//! oraclec-xag-db v1
//! <canonical table, 4 hex digits> <and count> <operand masks as aa.bb per AND>... <output mask, 2 hex digits><~ if complemented>
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use super::exact::{synthesize_u16, Affine, XagTemplate, MAX_ANDS, TEMPLATE_INPUTS};
use super::npn::{canonicalize_u16, npn_classes, to_u16, NpnTransform};
use crate::truth_table::TruthTable;
use crate::xag::{Signal, Xag};

pub const DB_HEADER: &str = "oraclec-xag-db v1";

#[derive(Debug, Error)]
pub enum DatabaseError {
    #[error("no template with at most {MAX_ANDS} ANDs for class 0x{0:04x}")]
    DatabaseIncomplete(u16),
    #[error("database file line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("database I/O: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatabaseEntry {
    pub canonical: u16,
    pub template: XagTemplate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XagDatabase {
    entries: Vec<DatabaseEntry>,
    index: HashMap<u16, usize>,
}

/// A database hit for one concrete function.
#[derive(Clone, Copy, Debug)]
pub struct Match<'a> {
    pub template: &'a XagTemplate,
    pub transform: NpnTransform,
}

impl<'a> Match<'a> {
    /// Instantiates the template so that it computes the looked-up function
    /// of `leaves` (at most four; missing leaves are unused variables).
    pub fn instantiate(&self, xag: &mut Xag, leaves: &[Signal]) -> Signal {
        let mut inputs = [Signal::FALSE; TEMPLATE_INPUTS];
        let tr = self.transform;
        for i in 0..TEMPLATE_INPUTS {
            let leaf = leaves.get(i).copied().unwrap_or(Signal::FALSE);
            inputs[tr.perm[i] as usize] = leaf.complement_if(tr.input_negations >> i & 1 == 1);
        }
        self.template
            .instantiate(xag, &inputs)
            .complement_if(tr.output_negated)
    }
}

impl XagDatabase {
    fn from_entries(mut entries: Vec<DatabaseEntry>) -> Self {
        entries.sort_by_key(|e| e.canonical);
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.canonical, i))
            .collect();
        XagDatabase { entries, index }
    }

    /// Synthesizes the optimal template for every NPN class, trying AND
    /// budgets 0, 1, 2, 3 in turn. Classes are processed in parallel.
    pub fn build() -> Result<Self, DatabaseError> {
        let entries: Result<Vec<_>, _> = npn_classes()
            .into_par_iter()
            .map(|c| {
                (0..=MAX_ANDS)
                    .find_map(|m| synthesize_u16(c, TEMPLATE_INPUTS, m))
                    .map(|template| DatabaseEntry {
                        canonical: c,
                        template,
                    })
                    .ok_or(DatabaseError::DatabaseIncomplete(c))
            })
            .collect();
        Ok(Self::from_entries(entries?))
    }

    pub fn entries(&self) -> &[DatabaseEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, canonical: u16) -> Option<&XagTemplate> {
        self.index
            .get(&canonical)
            .map(|&i| &self.entries[i].template)
    }

    /// Looks up a function of at most four variables.
    pub fn lookup(&self, t: &TruthTable) -> Option<Match<'_>> {
        let (c, transform) = canonicalize_u16(to_u16(t));
        self.get(c).map(|template| Match {
            template,
            transform,
        })
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        s.push_str(DB_HEADER);
        s.push('\n');
        for e in &self.entries {
            write!(s, "{:04x} {}", e.canonical, e.template.and_count()).unwrap();
            for [a, b] in &e.template.ands {
                write!(s, " {:02x}.{:02x}", a.mask, b.mask).unwrap();
            }
            let o = e.template.output;
            write!(s, " {:02x}{}", o.mask, if o.negated { "~" } else { "" }).unwrap();
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, DatabaseError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == DB_HEADER => {}
            _ => {
                return Err(DatabaseError::Format {
                    line: 1,
                    reason: format!("expected header `{DB_HEADER}`"),
                })
            }
        }
        let mut entries = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            let bad = |reason: &str| DatabaseError::Format {
                line: line_no,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() < 3 {
                return Err(bad("too few fields"));
            }
            let canonical =
                u16::from_str_radix(fields[0], 16).map_err(|_| bad("bad class table"))?;
            let n: usize = fields[1].parse().map_err(|_| bad("bad AND count"))?;
            if n > MAX_ANDS || fields.len() != n + 3 {
                return Err(bad("AND count does not match the gate list"));
            }
            let mask = |s: &str| u8::from_str_radix(s, 16).map_err(|_| bad("bad mask"));
            let mut ands = Vec::with_capacity(n);
            for f in &fields[2..2 + n] {
                let (a, b) = f.split_once('.').ok_or_else(|| bad("bad AND operands"))?;
                ands.push([
                    Affine {
                        mask: mask(a)?,
                        negated: false,
                    },
                    Affine {
                        mask: mask(b)?,
                        negated: false,
                    },
                ]);
            }
            let out = fields[n + 2];
            let (out_mask, negated) = match out.strip_suffix('~') {
                Some(m) => (m, true),
                None => (out, false),
            };
            let template = XagTemplate {
                ands,
                output: Affine {
                    mask: mask(out_mask)?,
                    negated,
                },
            };
            if template.table() != canonical {
                return Err(bad("template does not realize its class"));
            }
            entries.push(DatabaseEntry {
                canonical,
                template,
            });
        }
        Ok(Self::from_entries(entries))
    }

    pub fn load(path: &Path) -> Result<Self, DatabaseError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), DatabaseError> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.serialize())?;
        Ok(())
    }

    /// Loads the cache at `path`, rebuilding and rewriting it when it is
    /// missing, unreadable, or `rebuild` is set.
    pub fn load_or_build(path: &Path, rebuild: bool) -> Result<Self, DatabaseError> {
        if !rebuild {
            if let Ok(db) = Self::load(path) {
                if db.len() == npn_classes().len() {
                    return Ok(db);
                }
            }
        }
        let db = Self::build()?;
        db.save(path)?;
        Ok(db)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_db() -> XagDatabase {
        // classes of a few functions, enough for format tests
        let classes = [0x0000u16, 0x8000, 0x6996];
        let entries = classes
            .iter()
            .map(|&t| {
                let c = canonicalize_u16(t).0;
                let template = (0..=MAX_ANDS)
                    .find_map(|m| synthesize_u16(c, 4, m))
                    .unwrap();
                DatabaseEntry {
                    canonical: c,
                    template,
                }
            })
            .collect();
        XagDatabase::from_entries(entries)
    }

    #[test]
    fn text_round_trip() {
        let db = small_db();
        let text = db.serialize();
        let back = XagDatabase::parse(&text).unwrap();
        assert_eq!(back, db);
        assert_eq!(back.serialize(), text);
    }

    #[test]
    fn rejects_corrupt_lines() {
        let db = small_db();
        let text = db.serialize().replace(" 3 ", " 2 ");
        assert!(XagDatabase::parse(&text).is_err());
        assert!(XagDatabase::parse("bogus\n").is_err());
    }

    #[test]
    fn lookup_instantiates_original_function() {
        let db = small_db();
        let t = TruthTable::from_u64(4, 0x0080); // x0 & x1 & x2 & !x3
        let m = db.lookup(&t).unwrap();
        let mut g = Xag::new();
        let leaves: Vec<Signal> = (0..4).map(|i| g.add_input(format!("x{i}"))).collect();
        let s = m.instantiate(&mut g, &leaves);
        g.add_output(s, "f");
        assert_eq!(g.output_truth_tables().unwrap()[0], t);
    }
}
