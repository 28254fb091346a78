use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("bad graph spec `{spec}`: {message}")]
    Spec { spec: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize), ParseError> {
    let mut fields = line.split_whitespace();
    let mut next = |name: &str| -> Result<usize, ParseError> {
        let field = fields
            .next()
            .ok_or_else(|| syntax(line_no, format!("missing {name}")))?;
        field.parse().map_err(|_| {
            syntax(
                line_no,
                format!("{name} `{field}` is not a nonnegative integer"),
            )
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if fields.next().is_some() {
        return Err(syntax(line_no, "expected exactly two fields"));
    }
    Ok((a, b))
}

/// Parses the edge-list format: a header `n m`, then exactly `m` lines
/// `u v` with `1 <= u < v <= n`. Blank lines after the last edge are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (header_no, header) = lines.next().ok_or_else(|| syntax(1, "empty input"))?;
    let (n, m) = parse_pair(header_no, header)?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines.next().ok_or_else(|| {
            syntax(
                header_no,
                format!("header promises {m} edges, found {}", edges.len()),
            )
        })?;
        let (u, v) = parse_pair(line_no, line)?;
        if u == 0 || v > n {
            return Err(syntax(line_no, format!("vertex out of range 1..={n}")));
        }
        if u >= v {
            return Err(syntax(line_no, "edges must be written as `u v` with u < v"));
        }
        edges.push((u - 1, v - 1));
    }
    if let Some((line_no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(syntax(line_no, format!("more than {m} edge lines")));
    }
    Ok(Graph::new(n, edges)?)
}

/// The graph mini-language accepted on the command line:
/// `path:n`, `cycle:n`, `star:k` (`K_{1,k}`), `kbip:a,b`, `complete:n`,
/// `union:<spec>+<spec>+...` and `file:<edge list path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    Cycle(usize),
    Star(usize),
    CompleteBipartite(usize, usize),
    Complete(usize),
    Union(Vec<GraphSpec>),
    File(PathBuf),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph, ParseError> {
        Ok(match self {
            GraphSpec::Path(n) => Graph::path(*n)?,
            GraphSpec::Cycle(n) => Graph::cycle(*n)?,
            GraphSpec::Star(k) => Graph::star(*k)?,
            GraphSpec::CompleteBipartite(a, b) => Graph::complete_bipartite(*a, *b)?,
            GraphSpec::Complete(n) => Graph::complete(*n)?,
            GraphSpec::Union(parts) => {
                let mut graphs = parts.iter().map(GraphSpec::build);
                let first = graphs.next().expect("union has at least two parts")?;
                graphs.try_fold(first, |acc, g| Ok::<_, ParseError>(acc.disjoint_union(&g?)))?
            }
            GraphSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
                    path: path.clone(),
                    source,
                })?;
                parse_edge_list(&text)?
            }
        })
    }
}

impl FromStr for GraphSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |message: &str| ParseError::Spec {
            spec: s.to_string(),
            message: message.to_string(),
        };
        let number = |text: &str| -> Result<usize, ParseError> {
            text.trim()
                .parse()
                .map_err(|_| bad(&format!("`{text}` is not a nonnegative integer")))
        };
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| bad("expected <kind>:<argument>"))?;
        match kind.trim() {
            "path" => Ok(GraphSpec::Path(number(arg)?)),
            "cycle" => Ok(GraphSpec::Cycle(number(arg)?)),
            "star" => Ok(GraphSpec::Star(number(arg)?)),
            "complete" => Ok(GraphSpec::Complete(number(arg)?)),
            "kbip" => {
                let (a, b) = arg.split_once(',').ok_or_else(|| bad("kbip needs a,b"))?;
                Ok(GraphSpec::CompleteBipartite(number(a)?, number(b)?))
            }
            "union" => {
                let mut parts = Vec::new();
                // `+` is the only separator, so a nested `union:` just flattens
                for piece in arg.split('+') {
                    let piece = piece.trim();
                    parts.push(piece.strip_prefix("union:").unwrap_or(piece).parse()?);
                }
                if parts.len() < 2 {
                    return Err(bad("union needs at least two parts"));
                }
                Ok(GraphSpec::Union(parts))
            }
            "file" => Ok(GraphSpec::File(PathBuf::from(arg))),
            other => Err(bad(&format!("unknown graph kind `{other}`"))),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Star(k) => write!(f, "star:{k}"),
            GraphSpec::CompleteBipartite(a, b) => write!(f, "kbip:{a},{b}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Union(parts) => {
                write!(f, "union:")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{part}")?;
                }
                Ok(())
            }
            GraphSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::cycle(5).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "5 5\n1 2\n1 5\n2 3\n3 4\n4 5\n");
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3 2\n1 2\n").is_err());
        assert!(parse_edge_list("3 1\n2 1\n").is_err());
        assert!(parse_edge_list("3 1\n1 4\n").is_err());
        assert!(parse_edge_list("3 1\n1 2\n2 3\n").is_err());
        assert!(parse_edge_list("3 2\n1 2\n1 2\n").is_err());
        assert!(parse_edge_list("0 0\n").is_err());
        assert!(parse_edge_list("2 1\n1 x\n").is_err());
        let single = parse_edge_list("1 0\n").unwrap();
        assert_eq!((single.order(), single.size()), (1, 0));
        assert!(parse_edge_list("3  1\n 1\t3 \n\n").is_ok());
    }

    #[test]
    fn spec_language() {
        let spec: GraphSpec = "union:path:3+path:3".parse().unwrap();
        assert_eq!(
            spec,
            GraphSpec::Union(vec![GraphSpec::Path(3), GraphSpec::Path(3)])
        );
        assert_eq!(spec.to_string(), "union:path:3+path:3");
        let g = spec.build().unwrap();
        assert_eq!((g.order(), g.size()), (6, 4));

        let nested: GraphSpec = "union:cycle:4+union:path:1+star:3".parse().unwrap();
        assert_eq!(nested.build().unwrap().order(), 9);
        assert_eq!(
            "kbip:2,3"
                .parse::<GraphSpec>()
                .unwrap()
                .build()
                .unwrap()
                .size(),
            6
        );
        assert_eq!(
            "star:3"
                .parse::<GraphSpec>()
                .unwrap()
                .build()
                .unwrap()
                .max_degree(),
            3
        );
        assert!("path".parse::<GraphSpec>().is_err());
        assert!("wheel:5".parse::<GraphSpec>().is_err());
        assert!("union:path:3".parse::<GraphSpec>().is_err());
        assert!("cycle:2".parse::<GraphSpec>().unwrap().build().is_err());
        assert!("path:0".parse::<GraphSpec>().unwrap().build().is_err());
    }

    #[test]
    fn spec_from_file() {
        let dir = std::env::temp_dir().join(format!("propchoose-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p4.txt");
        std::fs::write(&path, Graph::path(4).unwrap().to_edge_list()).unwrap();
        let spec: GraphSpec = format!("file:{}", path.display()).parse().unwrap();
        assert_eq!(spec.build().unwrap(), Graph::path(4).unwrap());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
