//! Line-oriented text format for a generated graph.
//!
//! ```text
//! gluedwalk-graph 1
//! kind random-cycle
//! n 2
//! seeds 7 7 7
//! names 4
//! vertices 14
//! edges 20
//! v 0 0 0000
//! ...
//! e 0 1 B2
//! ...
//! sha256 <hex digest of every byte above this line>
//! ```
//!
//! Vertices are listed in id order with their column; a `-` stands for an
//! absent name, color or seed.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{
    coloring::EdgeColoring, naming::Naming, Color, GluedTrees, GraphKind, SeedRecord, VertexName,
};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "gluedwalk-graph";

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest.iter() {
        write!(s, "{b:02x}").unwrap();
    }
    s
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

pub fn to_text(g: &GluedTrees) -> String {
    let mut s = String::new();
    let seeds = g.seeds();
    writeln!(s, "{MAGIC} {FORMAT_VERSION}").unwrap();
    writeln!(s, "kind {}", g.kind().label()).unwrap();
    writeln!(s, "n {}", g.n()).unwrap();
    writeln!(
        s,
        "seeds {} {} {}",
        seeds.graph,
        opt(seeds.names),
        opt(seeds.coloring)
    )
    .unwrap();
    writeln!(s, "names {}", opt(g.naming().map(|nm| nm.width()))).unwrap();
    writeln!(s, "vertices {}", g.vertex_count()).unwrap();
    writeln!(s, "edges {}", g.edges().len()).unwrap();
    for v in 0..g.vertex_count() as u32 {
        writeln!(
            s,
            "v {v} {} {}",
            g.column(v),
            opt(g.naming().map(|nm| nm.name(v)))
        )
        .unwrap();
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        writeln!(
            s,
            "e {u} {v} {}",
            opt(g.coloring().map(|c| c.color(e as u32)))
        )
        .unwrap();
    }
    let digest = hex_digest(s.as_bytes());
    writeln!(s, "sha256 {digest}").unwrap();
    s
}

struct Lines<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lines<'a> {
    /// Next line split into fields, with the byte offset of its start.
    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        if self.pos >= self.text.len() {
            return Err(Error::Parse {
                offset: self.pos,
                message: format!("unexpected end of input, expected {what}"),
            });
        }
        let start = self.pos;
        let rest = &self.text[start..];
        let end = rest.find('\n').map_or(self.text.len(), |i| start + i);
        self.pos = (end + 1).min(self.text.len().max(end + 1));
        Ok((
            start,
            self.text[start..end].split_ascii_whitespace().collect(),
        ))
    }

    fn keyed(&mut self, key: &str, arity: usize) -> Result<(usize, Vec<&'a str>)> {
        let (off, fields) = self.next(key)?;
        if fields.first() != Some(&key) || fields.len() != arity + 1 {
            return Err(Error::Parse {
                offset: off,
                message: format!("expected `{key}` with {arity} value(s)"),
            });
        }
        Ok((off, fields[1..].to_vec()))
    }
}

fn num<T: std::str::FromStr>(s: &str, offset: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        offset,
        message: format!("bad {what} `{s}`"),
    })
}

fn opt_num<T: std::str::FromStr>(s: &str, offset: usize, what: &str) -> Result<Option<T>> {
    if s == "-" {
        Ok(None)
    } else {
        num(s, offset, what).map(Some)
    }
}

pub fn from_text(text: &str) -> Result<GluedTrees> {
    let body_end = text
        .rfind("sha256 ")
        .filter(|&i| i == 0 || text.as_bytes()[i - 1] == b'\n')
        .ok_or(Error::Parse {
            offset: text.len(),
            message: "missing sha256 line".into(),
        })?;
    let stored = text[body_end + 7..].trim_end();
    let computed = hex_digest(&text.as_bytes()[..body_end]);
    if stored != computed {
        return Err(Error::Checksum {
            stored: stored.into(),
            computed,
        });
    }
    let body = &text[..body_end];
    let mut lines = Lines { text: body, pos: 0 };

    let (off, magic) = lines.next("header")?;
    if magic.len() != 2 || magic[0] != MAGIC {
        return Err(Error::Parse {
            offset: off,
            message: format!("not a {MAGIC} file"),
        });
    }
    let version: u32 = num(magic[1], off, "version")?;
    if version != FORMAT_VERSION {
        return Err(Error::Parse {
            offset: off,
            message: format!("unsupported version {version}"),
        });
    }
    let (off, f) = lines.keyed("kind", 1)?;
    let kind = GraphKind::from_label(f[0]).map_err(|e| Error::Parse {
        offset: off,
        message: e.to_string(),
    })?;
    let (off, f) = lines.keyed("n", 1)?;
    let n: u32 = num(f[0], off, "n")?;
    if n == 0 || n > 24 {
        return Err(Error::Parse {
            offset: off,
            message: format!("n = {n} out of range"),
        });
    }
    let (off, f) = lines.keyed("seeds", 3)?;
    let seeds = SeedRecord {
        graph: num(f[0], off, "seed")?,
        names: opt_num(f[1], off, "seed")?,
        coloring: opt_num(f[2], off, "seed")?,
    };
    let (off, f) = lines.keyed("names", 1)?;
    let width: Option<u32> = opt_num(f[0], off, "name width")?;
    if let Some(w) = width {
        if w == 0 || w > VertexName::MAX_WIDTH {
            return Err(Error::Parse {
                offset: off,
                message: format!("name width {w} out of range"),
            });
        }
    }
    let (off, f) = lines.keyed("vertices", 1)?;
    let vertices: usize = num(f[0], off, "vertex count")?;
    if vertices as u64 != kind.vertex_count(n) {
        return Err(Error::Parse {
            offset: off,
            message: format!(
                "{vertices} vertices, kind requires {}",
                kind.vertex_count(n)
            ),
        });
    }
    let (off, f) = lines.keyed("edges", 1)?;
    let edge_count: usize = num(f[0], off, "edge count")?;
    if edge_count > 2 * vertices {
        return Err(Error::Parse {
            offset: off,
            message: "too many edges".into(),
        });
    }

    let mut columns = Vec::with_capacity(vertices);
    let mut names = Vec::with_capacity(if width.is_some() { vertices } else { 0 });
    for v in 0..vertices {
        let (off, f) = lines.keyed("v", 3)?;
        if num::<usize>(f[0], off, "vertex id")? != v {
            return Err(Error::Parse {
                offset: off,
                message: format!("expected vertex {v}"),
            });
        }
        columns.push((off, num::<u32>(f[1], off, "column")?));
        match (width, f[2]) {
            (None, "-") => {}
            (Some(w), s) if s.len() == w as usize => {
                let name = VertexName::parse(s).map_err(|e| Error::Parse {
                    offset: off,
                    message: e.to_string(),
                })?;
                names.push(name.bits());
            }
            _ => {
                return Err(Error::Parse {
                    offset: off,
                    message: format!("name `{}` does not match header", f[2]),
                })
            }
        }
    }
    let mut edges = Vec::with_capacity(edge_count);
    let mut colors = Vec::with_capacity(edge_count);
    let mut colored = None;
    for _ in 0..edge_count {
        let (off, f) = lines.keyed("e", 3)?;
        let u: u32 = num(f[0], off, "endpoint")?;
        let v: u32 = num(f[1], off, "endpoint")?;
        if u as usize >= vertices || v as usize >= vertices {
            return Err(Error::Parse {
                offset: off,
                message: format!("endpoint out of range in ({u}, {v})"),
            });
        }
        let has = f[2] != "-";
        if *colored.get_or_insert(has) != has {
            return Err(Error::Parse {
                offset: off,
                message: "colors given for some edges only".into(),
            });
        }
        if has {
            colors.push(Color::parse(f[2]).map_err(|e| Error::Parse {
                offset: off,
                message: e.to_string(),
            })?);
        }
        edges.push((u, v));
    }
    if lines.pos < body.len() {
        return Err(Error::Parse {
            offset: lines.pos,
            message: "trailing content before checksum".into(),
        });
    }

    let mut g = GluedTrees::from_parts(n, kind, edges).map_err(|e| Error::Parse {
        offset: body_end,
        message: e.to_string(),
    })?;
    for (v, &(off, col)) in columns.iter().enumerate() {
        if g.column(v as u32) != col {
            return Err(Error::Parse {
                offset: off,
                message: format!(
                    "vertex {v} listed in column {col}, id implies {}",
                    g.column(v as u32)
                ),
            });
        }
    }
    for &(u, v) in g.edges() {
        if g.column(u).abs_diff(g.column(v)) != 1 {
            return Err(Error::Parse {
                offset: body_end,
                message: format!("edge ({u}, {v}) does not join adjacent columns"),
            });
        }
    }
    if let Some(w) = width {
        let naming = Naming::from_names(w, names).map_err(|e| Error::Parse {
            offset: body_end,
            message: e.to_string(),
        })?;
        if naming.name(0).bits() != 0 {
            return Err(Error::Parse {
                offset: body_end,
                message: "entrance must be named 0".into(),
            });
        }
        g.set_naming(naming);
    }
    if colored == Some(true) {
        let coloring = EdgeColoring::from_colors(&g, colors).map_err(|e| Error::Parse {
            offset: body_end,
            message: e.to_string(),
        })?;
        g.set_coloring(coloring);
    }
    g.set_seeds(seeds);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_n4() {
        let g = GluedTrees::standard(4, 99).unwrap();
        let text = to_text(&g);
        assert!(text.len() < 1 << 20);
        assert_eq!(from_text(&text).unwrap(), g);
    }

    #[test]
    fn roundtrip_without_names() {
        let g = GluedTrees::generate(GraphKind::Identified, 3, 5).unwrap();
        assert_eq!(from_text(&to_text(&g)).unwrap(), g);
    }

    #[test]
    fn tampering_is_detected() {
        let g = GluedTrees::standard(2, 1).unwrap();
        let text = to_text(&g).replacen("e 0 ", "e 1 ", 1);
        assert!(matches!(from_text(&text), Err(Error::Checksum { .. })));
    }

    fn resealed(body: &str) -> String {
        format!("{body}sha256 {}\n", hex_digest(body.as_bytes()))
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let g = GluedTrees::standard(1, 1).unwrap();
        let text = to_text(&g);
        let body = &text[..text.rfind("sha256").unwrap()];
        let bad = resealed(&body.replacen("n 1", "n x", 1));
        match from_text(&bad) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, bad.find("n x").unwrap()),
            other => panic!("{other:?}"),
        }
        let bad = resealed(&body.replacen("vertices 6", "vertices 7", 1));
        assert!(matches!(from_text(&bad), Err(Error::Parse { .. })));
        assert!(matches!(from_text("garbage"), Err(Error::Parse { .. })));
    }
}
