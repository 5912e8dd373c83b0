use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};

/// Append-only attributed multigraph grown in arrival order.
///
/// Vertex ids are birth indices. Every edge points from a younger vertex to a
/// strictly older one, so the edge relation is a birth-ordered DAG. `degree`
/// is total degree (in + out) with the seed convention that an isolated seed
/// root starts at degree one.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    pub attribute: Vec<usize>,
    pub birth_index: Vec<usize>,
    /// Out-edges of each vertex, parallel edges repeated.
    pub out_edges: Vec<Vec<usize>>,
    pub degree: Vec<u64>,
    /// Number of vertices present before growth started.
    pub seed_size: usize,
    pub num_attributes: usize,
}

impl Graph {
    /// Single root of the given attribute; its degree starts at one so the
    /// first attachment step has positive weight.
    pub fn singleton_seed(root_attr: usize, num_attributes: usize) -> Self {
        Graph {
            attribute: vec![root_attr],
            birth_index: vec![0],
            out_edges: vec![vec![]],
            degree: vec![1],
            seed_size: 1,
            num_attributes,
        }
    }

    /// Star seed: one hub plus `leaves` vertices each sending one edge to the
    /// hub. Used for multi-edge models where every existing vertex must have
    /// degree at least one of real edges.
    pub fn star_seed(hub_attr: usize, leaf_attrs: &[usize], num_attributes: usize) -> Self {
        let n = 1 + leaf_attrs.len();
        let mut g = Graph {
            attribute: Vec::with_capacity(n),
            birth_index: (0..n).collect(),
            out_edges: vec![vec![]; n],
            degree: vec![0; n],
            seed_size: n,
            num_attributes,
        };
        g.attribute.push(hub_attr);
        g.attribute.extend_from_slice(leaf_attrs);
        for leaf in 1..n {
            g.out_edges[leaf].push(0);
            g.degree[leaf] += 1;
            g.degree[0] += 1;
        }
        g
    }

    pub fn n(&self) -> usize {
        self.attribute.len()
    }

    pub fn num_edges(&self) -> usize {
        self.out_edges.iter().map(|e| e.len()).sum()
    }

    /// Appends a vertex with the given attribute and parents (older vertex
    /// ids, multiplicity allowed), updating total degrees on both sides.
    pub fn push_vertex(&mut self, attr: usize, parents: &[usize]) -> usize {
        let id = self.n();
        self.attribute.push(attr);
        self.birth_index.push(id);
        self.degree.push(parents.len() as u64);
        for &p in parents {
            self.degree[p] += 1;
        }
        self.out_edges.push(parents.to_vec());
        id
    }

    pub fn is_tree(&self) -> bool {
        self.out_edges
            .iter()
            .enumerate()
            .all(|(v, e)| e.len() == usize::from(v > 0))
    }

    /// Verifies the structural invariants: ids are birth order, edges point
    /// strictly backwards in time, and stored degrees match edge counts.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.birth_index.len() != n || self.out_edges.len() != n || self.degree.len() != n {
            return Err(Error::DimensionMismatch(
                "graph columns have unequal lengths".into(),
            ));
        }
        if self.seed_size == 0 || self.seed_size > n {
            return Err(Error::EmptySeed);
        }
        let mut recomputed = vec![0u64; n];
        for (v, edges) in self.out_edges.iter().enumerate() {
            if self.birth_index[v] != v {
                return Err(Error::MalformedInput(format!(
                    "vertex {v} has birth index {}",
                    self.birth_index[v]
                )));
            }
            if self.attribute[v] >= self.num_attributes {
                return Err(Error::MalformedInput(format!(
                    "vertex {v} has attribute {} out of range",
                    self.attribute[v]
                )));
            }
            for &p in edges {
                if p >= v {
                    return Err(Error::CycleDetected(format!(
                        "edge {v} -> {p} does not point to an older vertex"
                    )));
                }
                recomputed[v] += 1;
                recomputed[p] += 1;
            }
        }
        for v in 0..n {
            let expected = if v == 0
                && self.seed_size == 1
                && self.degree[0] >= 1
                && recomputed[0] == self.degree[0] - 1
            {
                // singleton-seed convention: root carries one phantom unit
                self.degree[0] - 1
            } else {
                self.degree[v]
            };
            if recomputed[v] != expected {
                return Err(Error::MalformedInput(format!(
                    "vertex {v} stores degree {} but has {} incident edges",
                    self.degree[v], recomputed[v]
                )));
            }
        }
        Ok(())
    }

    pub fn attribute_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_attributes];
        for &a in &self.attribute {
            counts[a] += 1;
        }
        counts
    }

    /// Writes the vertex table (`id,attribute,birth_index,degree`).
    pub fn write_vertices_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "id,attribute,birth_index,degree")?;
        for v in 0..self.n() {
            writeln!(
                w,
                "{},{},{},{}",
                v, self.attribute[v], self.birth_index[v], self.degree[v]
            )?;
        }
        Ok(())
    }

    /// Writes the edge table (`child_id,parent_id`), children in birth order.
    pub fn write_edges_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "child_id,parent_id")?;
        for (v, edges) in self.out_edges.iter().enumerate() {
            for &p in edges {
                writeln!(w, "{v},{p}")?;
            }
        }
        Ok(())
    }

    /// Reads the CSV pair written by the two methods above. `seed_size` is
    /// not stored in the files; callers may override the default of one.
    pub fn read_csv<R1: Read, R2: Read>(vertices: R1, edges: R2) -> Result<Self> {
        let vreader = BufReader::new(vertices);
        let mut attribute = Vec::new();
        let mut birth_index = Vec::new();
        let mut degree = Vec::new();
        for (lineno, line) in vreader.lines().enumerate() {
            let line = line?;
            if lineno == 0 {
                if line.trim() != "id,attribute,birth_index,degree" {
                    return Err(Error::MalformedInput(format!(
                        "unexpected vertex header: {line}"
                    )));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 4 {
                return Err(Error::MalformedInput(format!(
                    "vertex line {lineno}: expected 4 fields, got {}",
                    fields.len()
                )));
            }
            let parse = |s: &str, what: &str| -> Result<usize> {
                s.parse().map_err(|_| {
                    Error::MalformedInput(format!("vertex line {lineno}: bad {what} '{s}'"))
                })
            };
            let id = parse(fields[0], "id")?;
            if id != attribute.len() {
                return Err(Error::MalformedInput(format!(
                    "vertex ids must be consecutive from 0, got {id} at position {}",
                    attribute.len()
                )));
            }
            attribute.push(parse(fields[1], "attribute")?);
            birth_index.push(parse(fields[2], "birth_index")?);
            degree.push(parse(fields[3], "degree")? as u64);
        }
        if attribute.is_empty() {
            return Err(Error::EmptySeed);
        }

        let n = attribute.len();
        let mut out_edges = vec![Vec::new(); n];
        let ereader = BufReader::new(edges);
        for (lineno, line) in ereader.lines().enumerate() {
            let line = line?;
            if lineno == 0 {
                if line.trim() != "child_id,parent_id" {
                    return Err(Error::MalformedInput(format!(
                        "unexpected edge header: {line}"
                    )));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 2 {
                return Err(Error::MalformedInput(format!(
                    "edge line {lineno}: expected 2 fields, got {}",
                    fields.len()
                )));
            }
            let parse = |s: &str| -> Result<usize> {
                s.parse()
                    .map_err(|_| Error::MalformedInput(format!("edge line {lineno}: bad id '{s}'")))
            };
            let child = parse(fields[0])?;
            let parent = parse(fields[1])?;
            if child >= n || parent >= n {
                return Err(Error::MalformedInput(format!(
                    "edge line {lineno}: vertex id out of range"
                )));
            }
            if parent >= child {
                return Err(Error::CycleDetected(format!(
                    "edge {child} -> {parent} does not point to an older vertex"
                )));
            }
            out_edges[child].push(parent);
        }

        let num_attributes = attribute.iter().copied().max().unwrap_or(0) + 1;
        let g = Graph {
            attribute,
            birth_index,
            out_edges,
            degree,
            seed_size: 1,
            num_attributes,
        };
        g.validate()?;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_tree() -> Graph {
        let mut g = Graph::singleton_seed(0, 2);
        g.push_vertex(1, &[0]);
        g.push_vertex(0, &[0]);
        g.push_vertex(1, &[1]);
        g
    }

    #[test]
    fn grows_and_counts_degrees() {
        let g = small_tree();
        assert_eq!(g.n(), 4);
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.degree, vec![3, 2, 1, 1]);
        assert!(g.is_tree());
        g.validate().unwrap();
    }

    #[test]
    fn star_seed_degrees() {
        let g = Graph::star_seed(0, &[1, 1, 0], 2);
        assert_eq!(g.n(), 4);
        assert_eq!(g.degree, vec![3, 1, 1, 1]);
        g.validate().unwrap();
    }

    #[test]
    fn csv_round_trip() {
        let g = small_tree();
        let mut vbuf = Vec::new();
        let mut ebuf = Vec::new();
        g.write_vertices_csv(&mut vbuf).unwrap();
        g.write_edges_csv(&mut ebuf).unwrap();
        let h = Graph::read_csv(&vbuf[..], &ebuf[..]).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn rejects_forward_edge() {
        let v = b"id,attribute,birth_index,degree\n0,0,0,1\n1,0,1,1\n" as &[u8];
        let e = b"child_id,parent_id\n0,1\n" as &[u8];
        let r = Graph::read_csv(v, e);
        assert!(matches!(r, Err(Error::CycleDetected(_))));
    }

    #[test]
    fn rejects_bad_degree_column() {
        let v = b"id,attribute,birth_index,degree\n0,0,0,1\n1,0,1,5\n" as &[u8];
        let e = b"child_id,parent_id\n1,0\n" as &[u8];
        let r = Graph::read_csv(v, e);
        assert!(matches!(r, Err(Error::MalformedInput(_))));
    }
}
