//! ASCII OFF reader and writer.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::{Polyhedron, Vec3};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads an ASCII OFF polyhedron. Geometry is not validated here.
pub fn read_off<R: Read>(source: R, label: &str) -> Result<Polyhedron> {
    // (1-based line number, tokens) for every non-blank line
    let mut lines = Vec::new();
    for (i, line) in BufReader::new(source).lines().enumerate() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("");
        let tokens: Vec<String> = content.split_whitespace().map(str::to_owned).collect();
        if !tokens.is_empty() {
            lines.push((i + 1, tokens));
        }
    }
    let mut lines = lines.into_iter();

    let (header_line, mut header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input, expected OFF header"))?;
    if header[0] != "OFF" {
        return Err(parse_err(
            header_line,
            format!("expected header \"OFF\", found {:?}", header[0]),
        ));
    }
    header.remove(0);
    let (counts_line, counts) = if header.is_empty() {
        lines
            .next()
            .ok_or_else(|| parse_err(header_line + 1, "missing counts line"))?
    } else {
        (header_line, header)
    };
    if counts.len() < 2 {
        return Err(parse_err(counts_line, "counts line must read \"V F E\""));
    }
    let parse_count = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| parse_err(counts_line, format!("invalid count {t:?}")))
    };
    let n_vertices = parse_count(&counts[0])?;
    let n_faces = parse_count(&counts[1])?;

    let mut vertices = Vec::with_capacity(n_vertices);
    let mut last_line = counts_line;
    for k in 0..n_vertices {
        let (ln, tokens) = lines.next().ok_or_else(|| {
            parse_err(
                last_line + 1,
                format!("expected {n_vertices} vertices, found {k}"),
            )
        })?;
        last_line = ln;
        if tokens.len() < 3 {
            return Err(parse_err(ln, "vertex line needs three coordinates"));
        }
        let mut xyz = [0.0; 3];
        for d in 0..3 {
            xyz[d] = tokens[d]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(ln, format!("invalid coordinate {:?}", tokens[d])))?;
        }
        vertices.push(Vec3::new(xyz[0], xyz[1], xyz[2]));
    }

    let mut faces = Vec::with_capacity(n_faces);
    for k in 0..n_faces {
        let (ln, tokens) = lines.next().ok_or_else(|| {
            parse_err(
                last_line + 1,
                format!("expected {n_faces} faces, found {k}"),
            )
        })?;
        last_line = ln;
        let count: usize = tokens[0]
            .parse()
            .map_err(|_| parse_err(ln, format!("invalid face size {:?}", tokens[0])))?;
        if count < 3 {
            return Err(parse_err(ln, format!("face has {count} vertices, need 3")));
        }
        // extra tokens after the indices (colors) are ignored
        if tokens.len() < count + 1 {
            return Err(parse_err(
                ln,
                format!(
                    "face declares {count} vertices but lists {}",
                    tokens.len() - 1
                ),
            ));
        }
        let mut face = Vec::with_capacity(count);
        for t in &tokens[1..=count] {
            let index: usize = t
                .parse()
                .map_err(|_| parse_err(ln, format!("invalid vertex index {t:?}")))?;
            if index >= n_vertices {
                return Err(Error::IndexOutOfRange {
                    face: k,
                    index,
                    count: n_vertices,
                });
            }
            face.push(index);
        }
        faces.push(face);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "unexpected data after the last face"));
    }

    Polyhedron::new(vertices, faces, label)
}

pub fn read_off_file(path: impl AsRef<Path>) -> Result<Polyhedron> {
    let path = path.as_ref();
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_off(File::open(path)?, &label)
}

/// Writes the polyhedron in the same dialect [`read_off`] accepts.
pub fn write_off<W: Write>(p: &Polyhedron, mut out: W) -> Result<()> {
    writeln!(out, "OFF")?;
    if !p.label.is_empty() {
        writeln!(out, "# {}", p.label)?;
    }
    let edges: usize = p.faces.iter().map(|f| f.len()).sum::<usize>() / 2;
    writeln!(out, "{} {} {}", p.vertices.len(), p.faces.len(), edges)?;
    for v in &p.vertices {
        writeln!(out, "{} {} {}", v.x, v.y, v.z)?;
    }
    for f in &p.faces {
        write!(out, "{}", f.len())?;
        for i in &f.vertex_indices {
            write!(out, " {i}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_off_file(p: &Polyhedron, path: impl AsRef<Path>) -> Result<()> {
    let mut file = std::io::BufWriter::new(File::create(path)?);
    write_off(p, &mut file)?;
    file.flush()?;
    Ok(())
}
