use rayon::prelude::*;

use super::word::alphabet;
use super::{GroupPresentation, Word};
use crate::error::{Error, Result};
use crate::hyperbolic::{BoundaryPoint, MobiusIsometry, ModelPoint};

/// Default bound on the number of enumerated words.
pub const DEFAULT_ORBIT_CAP: usize = 16_000_000;

const NO_PARENT: u32 = u32::MAX;

/// Number of freely reduced words of length ≤ `max_len` on `n` generators,
/// `1 + Σ_{l=1..L} 2n (2n-1)^{l-1}`, saturating.
pub fn reduced_word_count(n: usize, max_len: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    let (first, branch) = (2 * n as u128, 2 * n as u128 - 1);
    let mut total: u128 = 1;
    let mut level = first;
    for _ in 0..max_len {
        total = total.saturating_add(level);
        level = level.saturating_mul(branch);
    }
    total
}

/// A vertex of the word tree as seen by a visitor.
pub(crate) struct Node<'a> {
    pub len: usize,
    pub element: &'a MobiusIsometry,
}

/// Values computed on every reduced word, in breadth-first order with
/// letters in the order g1, g1⁻¹, g2, g2⁻¹, …, plus the tree structure.
pub(crate) struct Walk<T> {
    pub parents: Vec<u32>,
    pub letters: Vec<i8>,
    pub values: Vec<T>,
}

impl<T> Walk<T> {
    pub fn word(&self, mut i: usize) -> Word {
        let mut letters = Vec::new();
        while self.parents[i] != NO_PARENT {
            letters.push(self.letters[i]);
            i = self.parents[i] as usize;
        }
        letters.reverse();
        Word::from_reduced(letters)
    }
}

/// Breadth-first traversal of the reduced words of length ≤ `max_len`.
/// Each level is expanded in parallel; collection preserves the order.
pub(crate) fn walk_words<T, F>(group: &GroupPresentation, max_len: usize, cap: usize, visit: F) -> Result<Walk<T>>
where
    T: Send,
    F: Fn(&Node) -> T + Sync,
{
    let requested = reduced_word_count(group.generators().len(), max_len);
    if requested > cap as u128 || requested > NO_PARENT as u128 {
        return Err(Error::CapExceeded { requested, cap });
    }
    let letters_all = alphabet(group.generators().len());
    let mats: Vec<MobiusIsometry> = letters_all.iter().map(|&l| group.letter(l)).collect::<Result<_>>()?;
    let id = MobiusIsometry::identity(group.dim());

    let n = requested as usize;
    let mut walk = Walk { parents: Vec::with_capacity(n), letters: Vec::with_capacity(n), values: Vec::with_capacity(n) };
    walk.parents.push(NO_PARENT);
    walk.letters.push(0);
    walk.values.push(visit(&Node { len: 0, element: &id }));

    // frontier: (index, last letter, element)
    let mut frontier: Vec<(u32, i8, MobiusIsometry)> = vec![(0, 0, id)];
    for len in 1..=max_len {
        let children: Vec<(u32, i8, MobiusIsometry)> = frontier
            .par_iter()
            .flat_map_iter(|&(idx, last, g)| {
                letters_all.iter().zip(&mats).filter(move |(&l, _)| l != -last).map(move |(&l, m)| {
                    let mut h = g * *m;
                    if len % 4 == 0 {
                        h = h.renormalized();
                    }
                    (idx, l, h)
                })
            })
            .collect();
        let values: Vec<T> = children.par_iter().map(|(_, _, g)| visit(&Node { len, element: g })).collect();
        let offset = walk.values.len() as u32;
        walk.parents.extend(children.iter().map(|c| c.0));
        walk.letters.extend(children.iter().map(|c| c.1));
        walk.values.extend(values);
        frontier = children.into_iter().enumerate().map(|(j, (_, l, g))| (offset + j as u32, l, g)).collect();
    }
    Ok(walk)
}

/// Where an orbit starts: an interior point or a boundary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitPoint {
    Interior(ModelPoint),
    Boundary(BoundaryPoint),
}

impl OrbitPoint {
    fn moved_by(&self, g: &MobiusIsometry) -> Result<Self> {
        Ok(match self {
            OrbitPoint::Interior(p) => OrbitPoint::Interior(g.apply_point(p)?),
            OrbitPoint::Boundary(p) => OrbitPoint::Boundary(g.apply_boundary(p)?),
        })
    }

    fn dim(&self) -> usize {
        match self {
            OrbitPoint::Interior(p) => p.dim(),
            OrbitPoint::Boundary(p) => p.dim(),
        }
    }
}

struct Entry {
    len: u8,
    image: OrbitPoint,
    displacement: f64,
}

/// The images of a base point under every reduced word up to a length,
/// with the displacement `d(o, g o)` of the model's base point `o`.
pub struct OrbitSample {
    base: OrbitPoint,
    max_len: usize,
    walk: Walk<Entry>,
}

impl OrbitSample {
    pub fn base(&self) -> &OrbitPoint {
        &self.base
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.walk.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.values.is_empty()
    }

    pub fn word(&self, i: usize) -> Word {
        self.walk.word(i)
    }

    pub fn word_len(&self, i: usize) -> usize {
        self.walk.values[i].len as usize
    }

    pub fn image(&self, i: usize) -> &OrbitPoint {
        &self.walk.values[i].image
    }

    pub fn displacement(&self, i: usize) -> f64 {
        self.walk.values[i].displacement
    }

    /// Displacements of all entries, in enumeration order.
    pub fn displacements(&self) -> impl Iterator<Item = f64> + '_ {
        self.walk.values.iter().map(|e| e.displacement)
    }

    /// `(word length, displacement)` pairs in enumeration order.
    pub fn lengths_and_displacements(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.walk.values.iter().map(|e| (e.len as usize, e.displacement))
    }
}

pub fn enumerate_orbit(group: &GroupPresentation, base: OrbitPoint, max_len: usize) -> Result<OrbitSample> {
    enumerate_orbit_capped(group, base, max_len, DEFAULT_ORBIT_CAP)
}

/// [`enumerate_orbit`] with an explicit bound on the number of words.
pub fn enumerate_orbit_capped(
    group: &GroupPresentation,
    base: OrbitPoint,
    max_len: usize,
    cap: usize,
) -> Result<OrbitSample> {
    if base.dim() != group.dim() {
        return crate::error::contract("orbit base point and group live in different dimensions");
    }
    if max_len > u8::MAX as usize {
        return crate::error::contract("word length above 255 is not supported");
    }
    let walk = walk_words(group, max_len, cap, |node| Entry {
        len: node.len as u8,
        // dimension was checked above, so the action cannot fail
        image: base.moved_by(node.element).expect("matching dimensions"),
        displacement: node.element.displacement(),
    })?;
    Ok(OrbitSample { base, max_len, walk })
}
