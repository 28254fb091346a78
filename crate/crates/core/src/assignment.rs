//! `(k, ℓ)`-assignments, multiplicities, quotas and their enumeration.
//!
//! Every assignment on `n` vertices corresponds to an index in
//! `0..C(ℓ,k)^n`: vertex `0` is the most significant digit and each digit
//! selects a list from the lexicographically sorted table of `k`-subsets of
//! `[ℓ]` (for `(2,4)`: `{1,2},{1,3},{1,4},{2,3},{2,4},{3,4}`).

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// A color of the palette `[ℓ] = {1, ..., ℓ}`.
pub type Color = u16;

/// Full enumerations larger than this are refused unless forced.
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("need 1 <= k <= ell, got k = {k}, ell = {ell}")]
    InvalidParameters { k: usize, ell: Color },
    #[error("vertex {}: list has {got} colors, expected {expected}", .vertex + 1)]
    WrongListSize {
        vertex: Vertex,
        expected: usize,
        got: usize,
    },
    #[error("vertex {}: color {color} is outside the palette [1, {ell}]", .vertex + 1)]
    ColorOutOfRange {
        vertex: Vertex,
        color: Color,
        ell: Color,
    },
    #[error("vertex {}: color {color} repeated", .vertex + 1)]
    RepeatedColor { vertex: Vertex, color: Color },
    #[error("assignment has {lists} lists but the graph has {vertices} vertices")]
    LengthMismatch { lists: usize, vertices: usize },
    #[error("assignment index {index} out of range 0..{len}")]
    IndexOutOfRange { index: u64, len: u64 },
    #[error("C({ell},{k})^{n} does not fit in 64 bits")]
    SpaceTooLarge { n: usize, k: usize, ell: Color },
    #[error("enumeration of {count} assignments exceeds the cap of {cap}; raise the cap or force")]
    CapExceeded { count: u64, cap: u64 },
    #[error(
        "parameters of the assignment (k = {k}, ell = {ell}) do not match the enumeration space"
    )]
    SpaceMismatch { k: usize, ell: Color },
}

fn check_parameters(k: usize, ell: Color) -> Result<(), AssignmentError> {
    if k == 0 || k > ell as usize {
        return Err(AssignmentError::InvalidParameters { k, ell });
    }
    Ok(())
}

/// All `k`-subsets of `[ℓ]` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetTable {
    k: usize,
    ell: Color,
    subsets: Vec<Vec<Color>>,
}

impl SubsetTable {
    pub fn new(k: usize, ell: Color) -> Result<Self, AssignmentError> {
        check_parameters(k, ell)?;
        let subsets = (1..=ell).combinations(k).collect();
        Ok(SubsetTable { k, ell, subsets })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> Color {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn get(&self, i: usize) -> &[Color] {
        &self.subsets[i]
    }

    /// Position of a sorted `k`-subset.
    pub fn index_of(&self, subset: &[Color]) -> Option<usize> {
        self.subsets
            .binary_search_by(|s| s.as_slice().cmp(subset))
            .ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Color]> {
        self.subsets.iter().map(Vec::as_slice)
    }
}

/// A `(k, ℓ)`-assignment: every vertex gets a sorted list of `k` distinct
/// colors from `[ℓ]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AssignmentJson", into = "AssignmentJson")]
pub struct ListAssignment {
    k: usize,
    ell: Color,
    lists: Vec<Vec<Color>>,
}

/// Wire form: `{"k":2,"ell":4,"lists":[[1,2],[1,3],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssignmentJson {
    pub k: usize,
    pub ell: Color,
    pub lists: Vec<Vec<Color>>,
}

impl TryFrom<AssignmentJson> for ListAssignment {
    type Error = AssignmentError;

    fn try_from(json: AssignmentJson) -> Result<Self, Self::Error> {
        ListAssignment::new(json.k, json.ell, json.lists)
    }
}

impl From<ListAssignment> for AssignmentJson {
    fn from(l: ListAssignment) -> Self {
        AssignmentJson {
            k: l.k,
            ell: l.ell,
            lists: l.lists,
        }
    }
}

impl ListAssignment {
    /// Validates and normalizes (sorts) the lists.
    pub fn new(k: usize, ell: Color, lists: Vec<Vec<Color>>) -> Result<Self, AssignmentError> {
        check_parameters(k, ell)?;
        let mut lists = lists;
        for (vertex, list) in lists.iter_mut().enumerate() {
            if list.len() != k {
                return Err(AssignmentError::WrongListSize {
                    vertex,
                    expected: k,
                    got: list.len(),
                });
            }
            list.sort_unstable();
            for (i, &color) in list.iter().enumerate() {
                if color == 0 || color > ell {
                    return Err(AssignmentError::ColorOutOfRange { vertex, color, ell });
                }
                if i > 0 && list[i - 1] == color {
                    return Err(AssignmentError::RepeatedColor { vertex, color });
                }
            }
        }
        Ok(ListAssignment { k, ell, lists })
    }

    /// Gives every one of `n` vertices the same list.
    pub fn uniform(
        n: usize,
        k: usize,
        ell: Color,
        list: &[Color],
    ) -> Result<Self, AssignmentError> {
        ListAssignment::new(k, ell, vec![list.to_vec(); n])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> Color {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn list(&self, v: Vertex) -> &[Color] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn check_bound(&self, g: &Graph) -> Result<(), AssignmentError> {
        if self.lists.len() != g.order() {
            return Err(AssignmentError::LengthMismatch {
                lists: self.lists.len(),
                vertices: g.order(),
            });
        }
        Ok(())
    }

    pub fn multiplicities(&self) -> MultiplicityTable {
        multiplicities(self)
    }

    /// Applies a palette permutation colorwise.
    pub fn permute(&self, perm: &PalettePermutation) -> ListAssignment {
        let lists = self
            .lists
            .iter()
            .map(|list| {
                let mut image: Vec<Color> = list.iter().map(|&c| perm.apply(c)).collect();
                image.sort_unstable();
                image
            })
            .collect();
        ListAssignment {
            k: self.k,
            ell: self.ell,
            lists,
        }
    }

    /// The assignment for `G + H` that uses `self` on `G` and `other` on `H`.
    /// The palette bound is the larger of the two.
    pub fn concat(&self, other: &ListAssignment) -> Result<ListAssignment, AssignmentError> {
        if self.k != other.k {
            return Err(AssignmentError::SpaceMismatch {
                k: other.k,
                ell: other.ell,
            });
        }
        let mut lists = self.lists.clone();
        lists.extend(other.lists.iter().cloned());
        ListAssignment::new(self.k, self.ell.max(other.ell), lists)
    }

    /// Same lists, palette bound raised to `ell`.
    pub fn with_ell(&self, ell: Color) -> Result<ListAssignment, AssignmentError> {
        ListAssignment::new(self.k, ell, self.lists.clone())
    }
}

impl fmt::Display for ListAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .lists
            .iter()
            .map(|l| format!("{{{}}}", l.iter().join(",")))
            .collect();
        write!(
            f,
            "({},{})-assignment {}",
            self.k,
            self.ell,
            rendered.join(" ")
        )
    }
}

/// `η(c)`: the number of vertices whose list contains `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    counts: Vec<usize>,
}

impl MultiplicityTable {
    /// `η(c)`, zero for colors outside the palette.
    pub fn get(&self, c: Color) -> usize {
        self.counts.get(c as usize).copied().unwrap_or(0)
    }

    /// `(c, η(c))` for every palette color, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (Color, usize)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &eta)| eta > 0)
            .map(|(c, &eta)| (c as Color, eta))
    }

    /// The palette: colors appearing in at least one list.
    pub fn palette(&self) -> Vec<Color> {
        self.iter().map(|(c, _)| c).collect()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Palette colors with odd multiplicity.
    pub fn odd_colors(&self) -> Vec<Color> {
        self.iter()
            .filter(|(_, eta)| eta % 2 == 1)
            .map(|(c, _)| c)
            .collect()
    }
}

pub fn multiplicities(l: &ListAssignment) -> MultiplicityTable {
    let mut counts = vec![0usize; l.ell as usize + 1];
    for list in &l.lists {
        for &c in list {
            counts[c as usize] += 1;
        }
    }
    MultiplicityTable { counts }
}

/// Allowed class sizes `⌊η/k⌋ ..= ⌈η/k⌉` for one color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quota {
    pub lo: usize,
    pub hi: usize,
}

impl Quota {
    pub fn for_multiplicity(eta: usize, k: usize) -> Quota {
        Quota {
            lo: eta / k,
            hi: eta.div_ceil(k),
        }
    }

    pub fn admits(&self, size: usize) -> bool {
        self.lo <= size && size <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotaTable {
    bounds: Vec<Option<Quota>>,
}

impl QuotaTable {
    pub fn get(&self, c: Color) -> Option<Quota> {
        self.bounds.get(c as usize).copied().flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Color, Quota)> + '_ {
        self.bounds
            .iter()
            .enumerate()
            .filter_map(|(c, q)| q.map(|q| (c as Color, q)))
    }
}

pub fn quotas(m: &MultiplicityTable, k: usize) -> QuotaTable {
    assert!(k >= 1, "list size must be positive");
    let bounds = m
        .counts
        .iter()
        .map(|&eta| (eta > 0).then(|| Quota::for_multiplicity(eta, k)))
        .collect();
    QuotaTable { bounds }
}

/// A permutation of `[ℓ]`, stored as the image of `1, ..., ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalettePermutation(Vec<Color>);

impl PalettePermutation {
    pub fn identity(ell: Color) -> Self {
        PalettePermutation((1..=ell).collect())
    }

    /// `images[c - 1]` is the image of color `c`. Returns `None` unless the
    /// images are exactly `1..=images.len()` in some order.
    pub fn from_images(images: Vec<Color>) -> Option<Self> {
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted
            .iter()
            .enumerate()
            .all(|(i, &c)| c as usize == i + 1)
            .then_some(PalettePermutation(images))
    }

    pub fn apply(&self, c: Color) -> Color {
        self.0[c as usize - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &image) in self.0.iter().enumerate() {
            inv[image as usize - 1] = (i + 1) as Color;
        }
        PalettePermutation(inv)
    }

    pub fn images(&self) -> &[Color] {
        &self.0
    }

    /// All `ℓ!` permutations, identity first.
    pub fn all(ell: Color) -> impl Iterator<Item = PalettePermutation> {
        (1..=ell).permutations(ell as usize).map(PalettePermutation)
    }
}

/// Whether to enumerate every assignment or one per palette-permutation orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationMode {
    #[default]
    Full,
    Canonical,
}

impl fmt::Display for EnumerationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnumerationMode::Full => "full",
            EnumerationMode::Canonical => "canonical",
        })
    }
}

impl std::str::FromStr for EnumerationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(EnumerationMode::Full),
            "canonical" => Ok(EnumerationMode::Canonical),
            other => Err(format!(
                "unknown mode `{other}` (expected full or canonical)"
            )),
        }
    }
}

/// Guard on the size of a full enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimit {
    pub cap: u64,
    pub force: bool,
}

impl Default for EnumerationLimit {
    fn default() -> Self {
        EnumerationLimit {
            cap: DEFAULT_ENUMERATION_CAP,
            force: false,
        }
    }
}

/// The index space of all `(k, ℓ)`-assignments on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentSpace {
    n: usize,
    table: SubsetTable,
    /// `place[v] = C(ℓ,k)^(n-1-v)`.
    place: Vec<u64>,
    len: u64,
}

impl AssignmentSpace {
    pub fn new(n: usize, k: usize, ell: Color) -> Result<Self, AssignmentError> {
        let table = SubsetTable::new(k, ell)?;
        let radix = table.len() as u64;
        let too_large = AssignmentError::SpaceTooLarge { n, k, ell };
        let mut place = vec![1u64; n];
        for v in (0..n.saturating_sub(1)).rev() {
            place[v] = place[v + 1].checked_mul(radix).ok_or(too_large.clone())?;
        }
        let len = match place.first() {
            Some(&p) => p.checked_mul(radix).ok_or(too_large)?,
            None => 1,
        };
        Ok(AssignmentSpace {
            n,
            table,
            place,
            len,
        })
    }

    pub fn for_graph(g: &Graph, k: usize, ell: Color) -> Result<Self, AssignmentError> {
        AssignmentSpace::new(g.order(), k, ell)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.table.k
    }

    pub fn ell(&self) -> Color {
        self.table.ell
    }

    pub fn table(&self) -> &SubsetTable {
        &self.table
    }

    /// `C(ℓ,k)^n`.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn check_limit(&self, limit: EnumerationLimit) -> Result<(), AssignmentError> {
        if !limit.force && self.len > limit.cap {
            return Err(AssignmentError::CapExceeded {
                count: self.len,
                cap: limit.cap,
            });
        }
        Ok(())
    }

    pub(crate) fn decode_digits(&self, index: u64, digits: &mut [usize]) {
        let radix = self.table.len() as u64;
        for (v, digit) in digits.iter_mut().enumerate() {
            *digit = ((index / self.place[v]) % radix) as usize;
        }
    }

    pub(crate) fn assignment_from_digits(&self, digits: &[usize]) -> ListAssignment {
        ListAssignment {
            k: self.table.k,
            ell: self.table.ell,
            lists: digits
                .iter()
                .map(|&d| self.table.subsets[d].clone())
                .collect(),
        }
    }

    pub fn decode(&self, index: u64) -> Result<ListAssignment, AssignmentError> {
        if index >= self.len {
            return Err(AssignmentError::IndexOutOfRange {
                index,
                len: self.len,
            });
        }
        let mut digits = vec![0; self.n];
        self.decode_digits(index, &mut digits);
        Ok(self.assignment_from_digits(&digits))
    }

    pub fn encode(&self, l: &ListAssignment) -> Result<u64, AssignmentError> {
        if l.k != self.table.k || l.ell != self.table.ell {
            return Err(AssignmentError::SpaceMismatch { k: l.k, ell: l.ell });
        }
        if l.len() != self.n {
            return Err(AssignmentError::LengthMismatch {
                lists: l.len(),
                vertices: self.n,
            });
        }
        Ok(l.lists
            .iter()
            .zip(&self.place)
            .map(|(list, &p)| {
                self.table
                    .index_of(list)
                    .expect("validated lists are k-subsets") as u64
                    * p
            })
            .sum())
    }

    /// Every assignment, in index order.
    pub fn iter(&self) -> Assignments {
        self.iter_range(0, self.len)
    }

    pub fn iter_range(&self, start: u64, end: u64) -> Assignments {
        Assignments {
            cursor: DigitCursor::new(self, start, end.min(self.len)),
            space: self.clone(),
        }
    }

    /// One assignment per orbit of the palette-permutation action: the
    /// lexicographically least member of each orbit, in index order.
    pub fn iter_canonical(&self) -> CanonicalAssignments {
        self.iter_canonical_range(0, self.len)
    }

    pub fn iter_canonical_range(&self, start: u64, end: u64) -> CanonicalAssignments {
        CanonicalAssignments {
            cursor: DigitCursor::new(self, start, end.min(self.len)),
            symmetry: PaletteSymmetry::new(&self.table),
            space: self.clone(),
        }
    }

    /// The least member of the orbit of `l`.
    pub fn canonicalize(&self, l: &ListAssignment) -> Result<ListAssignment, AssignmentError> {
        self.encode(l)?;
        let mut best = l.clone();
        for perm in PalettePermutation::all(self.table.ell) {
            let image = l.permute(&perm);
            if image.lists < best.lists {
                best = image;
            }
        }
        Ok(best)
    }
}

/// Convenience form of [`AssignmentSpace::decode`].
pub fn index_to_assignment(
    g: &Graph,
    k: usize,
    ell: Color,
    index: u64,
) -> Result<ListAssignment, AssignmentError> {
    AssignmentSpace::for_graph(g, k, ell)?.decode(index)
}

/// Convenience form of [`AssignmentSpace::encode`].
pub fn assignment_to_index(g: &Graph, l: &ListAssignment) -> Result<u64, AssignmentError> {
    l.check_bound(g)?;
    AssignmentSpace::for_graph(g, l.k, l.ell)?.encode(l)
}

/// Streams the assignments of `g` in the requested mode. Full enumerations
/// above `limit.cap` are refused unless `limit.force` is set.
pub fn enumerate_assignments(
    g: &Graph,
    k: usize,
    ell: Color,
    mode: EnumerationMode,
    limit: EnumerationLimit,
) -> Result<AssignmentIter, AssignmentError> {
    let space = AssignmentSpace::for_graph(g, k, ell)?;
    space.check_limit(limit)?;
    Ok(match mode {
        EnumerationMode::Full => AssignmentIter::Full(space.iter()),
        EnumerationMode::Canonical => AssignmentIter::Canonical(space.iter_canonical()),
    })
}

pub enum AssignmentIter {
    Full(Assignments),
    Canonical(CanonicalAssignments),
}

impl Iterator for AssignmentIter {
    type Item = ListAssignment;

    fn next(&mut self) -> Option<ListAssignment> {
        match self {
            AssignmentIter::Full(it) => it.next(),
            AssignmentIter::Canonical(it) => it.next().map(|(_, l)| l),
        }
    }
}

/// Mixed-radix odometer over a contiguous index range.
#[derive(Debug, Clone)]
pub(crate) struct DigitCursor {
    digits: Vec<usize>,
    index: u64,
    end: u64,
    radix: usize,
    place: Vec<u64>,
}

impl DigitCursor {
    pub(crate) fn new(space: &AssignmentSpace, start: u64, end: u64) -> Self {
        let mut digits = vec![0; space.n];
        if start < space.len {
            space.decode_digits(start, &mut digits);
        }
        DigitCursor {
            digits,
            index: start,
            end,
            radix: space.table.len(),
            place: space.place.clone(),
        }
    }

    pub(crate) fn current(&self) -> Option<(u64, &[usize])> {
        (self.index < self.end).then_some((self.index, self.digits.as_slice()))
    }

    pub(crate) fn step(&mut self) {
        self.index += 1;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.radix {
                return;
            }
            *d = 0;
        }
    }

    /// Moves past every index sharing the digits `0..=pos` with the current one.
    pub(crate) fn skip_prefix(&mut self, pos: usize) {
        let block = self.place[pos];
        self.index = (self.index / block + 1) * block;
        for d in &mut self.digits[pos + 1..] {
            *d = 0;
        }
        for d in self.digits[..=pos].iter_mut().rev() {
            *d += 1;
            if *d < self.radix {
                return;
            }
            *d = 0;
        }
    }
}

/// Palette permutations as maps on subset-table indices.
#[derive(Debug, Clone)]
pub(crate) struct PaletteSymmetry {
    maps: Vec<Vec<usize>>,
}

impl PaletteSymmetry {
    pub(crate) fn new(table: &SubsetTable) -> Self {
        let maps = PalettePermutation::all(table.ell)
            .skip(1)
            .map(|perm| {
                table
                    .iter()
                    .map(|subset| {
                        let mut image: Vec<Color> = subset.iter().map(|&c| perm.apply(c)).collect();
                        image.sort_unstable();
                        table
                            .index_of(&image)
                            .expect("image of a k-subset is a k-subset")
                    })
                    .collect()
            })
            .collect();
        PaletteSymmetry { maps }
    }

    /// The smallest position at which some permuted image is already
    /// lexicographically below `digits`, or `None` when `digits` is the least
    /// member of its orbit.
    pub(crate) fn first_violation(&self, digits: &[usize]) -> Option<usize> {
        let mut worst: Option<usize> = None;
        for map in &self.maps {
            let limit = worst.unwrap_or(digits.len());
            for (pos, &d) in digits[..limit].iter().enumerate() {
                let image = map[d];
                if image != d {
                    if image < d {
                        worst = Some(pos);
                    }
                    break;
                }
            }
            if worst == Some(0) {
                break;
            }
        }
        worst
    }

    /// Advances `cursor` to the next canonical index, if any in range.
    pub(crate) fn seek(&self, cursor: &mut DigitCursor) -> Option<u64> {
        loop {
            let (index, digits) = cursor.current()?;
            match self.first_violation(digits) {
                None => return Some(index),
                Some(pos) => cursor.skip_prefix(pos),
            }
        }
    }
}

pub struct Assignments {
    space: AssignmentSpace,
    cursor: DigitCursor,
}

impl Iterator for Assignments {
    type Item = ListAssignment;

    fn next(&mut self) -> Option<ListAssignment> {
        let (_, digits) = self.cursor.current()?;
        let l = self.space.assignment_from_digits(digits);
        self.cursor.step();
        Some(l)
    }
}

/// Yields `(index, assignment)` for each canonical representative.
pub struct CanonicalAssignments {
    space: AssignmentSpace,
    cursor: DigitCursor,
    symmetry: PaletteSymmetry,
}

impl Iterator for CanonicalAssignments {
    type Item = (u64, ListAssignment);

    fn next(&mut self) -> Option<Self::Item> {
        let index = self.symmetry.seek(&mut self.cursor)?;
        let (_, digits) = self.cursor.current()?;
        let l = self.space.assignment_from_digits(digits);
        self.cursor.step();
        Some((index, l))
    }
}
