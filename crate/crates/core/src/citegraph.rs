//! Undirected citation graph: shortest link distance (SLD), link-based
//! similarity, and stratified pair sampling at a fixed SLD.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A simple undirected graph over judgment ids. Self-loops and duplicate
/// edges are rejected at insertion.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CitationGraph {
    adjacency: BTreeMap<String, BTreeSet<String>>,
    num_edges: usize,
}

impl CitationGraph {
    pub fn new() -> Self {
        CitationGraph::default()
    }

    pub fn add_node(&mut self, id: impl Into<String>) {
        self.adjacency.entry(id.into()).or_default();
    }

    /// Adds an undirected edge, creating missing endpoints. Returns false
    /// (and changes nothing) for self-loops and duplicates.
    pub fn add_edge(&mut self, a: impl Into<String>, b: impl Into<String>) -> bool {
        let a = a.into();
        let b = b.into();
        if a == b {
            return false;
        }
        if self.adjacency.get(&a).is_some_and(|n| n.contains(&b)) {
            return false;
        }
        self.adjacency.entry(a.clone()).or_default().insert(b.clone());
        self.adjacency.entry(b).or_default().insert(a);
        self.num_edges += 1;
        true
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn contains(&self, id: &str) -> bool {
        self.adjacency.contains_key(id)
    }

    /// Node ids in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.adjacency.keys().map(String::as_str)
    }

    pub fn neighbors(&self, id: &str) -> Option<impl Iterator<Item = &str>> {
        self.adjacency.get(id).map(|n| n.iter().map(String::as_str))
    }

    pub fn degree(&self, id: &str) -> Option<usize> {
        self.adjacency.get(id).map(BTreeSet::len)
    }

    /// Shortest link distance between two nodes by breadth-first search;
    /// `None` when the nodes are in different components.
    pub fn sld(&self, a: &str, b: &str) -> Result<Option<u32>> {
        if !self.contains(a) {
            return Err(Error::UnknownNode(a.to_string()));
        }
        if !self.contains(b) {
            return Err(Error::UnknownNode(b.to_string()));
        }
        if a == b {
            return Ok(Some(0));
        }
        let mut visited: HashSet<&str> = HashSet::new();
        let mut queue: VecDeque<(&str, u32)> = VecDeque::new();
        visited.insert(a);
        queue.push_back((a, 0));
        while let Some((node, depth)) = queue.pop_front() {
            for neighbor in &self.adjacency[node] {
                if neighbor == b {
                    return Ok(Some(depth + 1));
                }
                if visited.insert(neighbor) {
                    queue.push_back((neighbor, depth + 1));
                }
            }
        }
        Ok(None)
    }

    /// All nodes at exactly `distance` hops from `source`, in ascending id
    /// order. The search stops expanding beyond `distance`.
    pub fn nodes_at_distance(&self, source: &str, distance: u32) -> Result<Vec<&str>> {
        let Some((source, _)) = self.adjacency.get_key_value(source) else {
            return Err(Error::UnknownNode(source.to_string()));
        };
        if distance == 0 {
            return Ok(vec![source.as_str()]);
        }
        let mut visited: HashSet<&str> = HashSet::new();
        visited.insert(source.as_str());
        let mut frontier: Vec<&str> = vec![source.as_str()];
        for _ in 0..distance {
            let mut next: Vec<&str> = Vec::new();
            for node in frontier {
                for neighbor in &self.adjacency[node] {
                    if visited.insert(neighbor) {
                        next.push(neighbor);
                    }
                }
            }
            if next.is_empty() {
                return Ok(Vec::new());
            }
            frontier = next;
        }
        frontier.sort_unstable();
        Ok(frontier)
    }
}

/// Counters reported by [`load_graph`] for the caller to surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeFileStats {
    pub edges_added: usize,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

/// Reads an edge file: one `id1<TAB>id2` edge per line, `#` comment lines
/// and blank lines ignored. Self-loops are dropped and duplicate edges
/// collapsed, both counted in the returned stats.
///
/// Ids that match no corpus document are permitted here; they surface at
/// analysis time when a sampled pair cannot be scored.
pub fn load_graph(path: impl AsRef<Path>) -> Result<(CitationGraph, EdgeFileStats)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_graph_reader(file, &path.display().to_string())
}

pub fn load_graph_reader(reader: impl Read, label: &str) -> Result<(CitationGraph, EdgeFileStats)> {
    let reader = BufReader::new(reader);
    let mut graph = CitationGraph::new();
    let mut stats = EdgeFileStats::default();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::malformed(label, line_no, e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::malformed(
                label,
                line_no,
                "expected exactly two tab-separated ids",
            ));
        };
        let (a, b) = (a.trim(), b.trim());
        if a.is_empty() || b.is_empty() {
            return Err(Error::malformed(label, line_no, "empty id"));
        }
        if a == b {
            stats.self_loops_dropped += 1;
            graph.add_node(a);
            continue;
        }
        if graph.add_edge(a, b) {
            stats.edges_added += 1;
        } else {
            stats.duplicates_collapsed += 1;
        }
    }
    Ok((graph, stats))
}

/// Link-based similarity: the inverse of the shortest link distance, with
/// unreachable pairs at 0 (the `d -> infinity` limit).
pub fn lb_sim(distance: Option<u32>) -> f64 {
    match distance {
        Some(d) if d > 0 => 1.0 / d as f64,
        Some(_) => 1.0,
        None => 0.0,
    }
}

/// A seeded sample of unordered judgment pairs at one exact SLD.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SldPairSample {
    pub sld: u32,
    /// Unordered, deduplicated pairs, each stored with its smaller id
    /// first, in draw order.
    pub pairs: Vec<(String, String)>,
    pub seed: u64,
    /// Set when fewer than the requested pairs could be drawn.
    pub shortage: bool,
}

impl SldPairSample {
    /// Dumps the sample as CSV (`d,id1,id2`) with a comment line
    /// recording the seed.
    pub fn write_csv(&self, mut writer: impl Write) -> std::io::Result<()> {
        writeln!(writer, "# seed={}", self.seed)?;
        writeln!(writer, "d,id1,id2")?;
        for (a, b) in &self.pairs {
            writeln!(
                writer,
                "{},{},{}",
                self.sld,
                crate::util::csv_field(a),
                crate::util::csv_field(b)
            )?;
        }
        Ok(())
    }
}

/// Draws up to `count` distinct unordered pairs whose distance is exactly
/// `d`, reproducibly for a given seed.
///
/// Sampling picks a random source node, walks breadth-first to depth `d`,
/// and picks one node at that exact depth; duplicate pairs are rejected.
/// After `10 * count` total attempts the sample is returned short, with
/// the shortage flag set. Exact-distance sampling that is uniform over
/// all pairs would need all-pairs distances, which does not scale to a
/// full citation graph.
pub fn sample_pairs_at_sld(
    graph: &CitationGraph,
    d: u32,
    count: usize,
    seed: u64,
) -> Result<SldPairSample> {
    if d == 0 {
        return Err(Error::InvalidArgument("sld stratum must be at least 1".into()));
    }
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let nodes: Vec<&str> = graph.nodes().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: BTreeSet<(String, String)> = BTreeSet::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    let max_attempts = count.saturating_mul(10);
    let mut attempts = 0;
    while pairs.len() < count && attempts < max_attempts && !nodes.is_empty() {
        attempts += 1;
        let source = nodes[rng.gen_range(0..nodes.len())];
        let at_depth = graph.nodes_at_distance(source, d)?;
        if at_depth.is_empty() {
            continue;
        }
        let target = at_depth[rng.gen_range(0..at_depth.len())];
        let pair = if source <= target {
            (source.to_string(), target.to_string())
        } else {
            (target.to_string(), source.to_string())
        };
        if chosen.insert(pair.clone()) {
            pairs.push(pair);
        }
    }
    let shortage = pairs.len() < count;
    Ok(SldPairSample {
        sld: d,
        pairs,
        seed,
        shortage,
    })
}

/// Floyd-Warshall all-pairs distances; quadratic memory, test-sized
/// graphs only.
pub fn all_pairs_shortest_paths(graph: &CitationGraph) -> HashMap<(String, String), u32> {
    let nodes: Vec<&str> = graph.nodes().collect();
    let n = nodes.len();
    let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    const INF: u32 = u32::MAX / 2;
    let mut dist = vec![INF; n * n];
    for i in 0..n {
        dist[i * n + i] = 0;
    }
    for a in &nodes {
        for b in graph.neighbors(a).expect("node exists") {
            let (i, j) = (index[a], index[b]);
            dist[i * n + j] = 1;
            dist[j * n + i] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik == INF {
                continue;
            }
            for j in 0..n {
                let through = dik + dist[k * n + j];
                if through < dist[i * n + j] {
                    dist[i * n + j] = through;
                }
            }
        }
    }
    let mut out = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if dist[i * n + j] < INF {
                out.insert((nodes[i].to_string(), nodes[j].to_string()), dist[i * n + j]);
            }
        }
    }
    out
}
