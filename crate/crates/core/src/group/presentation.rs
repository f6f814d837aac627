use super::Word;
use crate::error::{contract, Result};
use crate::hyperbolic::{BoundaryPoint, IsometryKind, MobiusIsometry, Model};

/// Tolerance for a declared cusp to be fixed by its witness parabolics.
pub const CUSP_FIX_TOL: f64 = 1e-8;

/// A cusp declared by a presentation: its boundary point, its rank and the
/// parabolic words witnessing it.
#[derive(Debug, Clone, PartialEq)]
pub struct DeclaredCusp {
    pub point: BoundaryPoint,
    pub rank: u32,
    pub witnesses: Vec<Word>,
}

/// A finitely generated group of isometries of the upper half-space.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    name: String,
    dim: usize,
    generators: Vec<MobiusIsometry>,
    inverses: Vec<MobiusIsometry>,
    declared_cusps: Vec<DeclaredCusp>,
}

/// `|g(p) - p|` in the half-space chart, with ∞ compared by identity.
pub(crate) fn boundary_gap(a: &BoundaryPoint, b: &BoundaryPoint) -> f64 {
    a.euclidean_distance(b).unwrap_or(f64::INFINITY)
}

impl GroupPresentation {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        generators: Vec<MobiusIsometry>,
        declared_cusps: Vec<DeclaredCusp>,
    ) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return contract(format!("group dimension must be 2 or 3, got {dim}"));
        }
        if generators.len() > i8::MAX as usize {
            return contract("too many generators");
        }
        for (i, g) in generators.iter().enumerate() {
            if g.dim() != dim {
                return contract(format!("generator {} acts on H{}, expected H{dim}", i + 1, g.dim()));
            }
            if g.classify() == IsometryKind::Identity {
                return contract(format!("generator {} is the identity", i + 1));
            }
        }
        let inverses = generators.iter().map(|g| g.inverse()).collect();
        let group = Self { name: name.into(), dim, generators, inverses, declared_cusps };
        for cusp in &group.declared_cusps {
            group.check_cusp(cusp)?;
        }
        Ok(group)
    }

    fn check_cusp(&self, cusp: &DeclaredCusp) -> Result<()> {
        let p = &cusp.point;
        if p.model() != Model::HalfSpace || p.dim() != self.dim {
            return contract("declared cusps must be half-space boundary points of the group's dimension");
        }
        if cusp.rank == 0 || cusp.rank as usize > self.dim - 1 {
            return contract(format!("cusp rank {} outside [1, {}]", cusp.rank, self.dim - 1));
        }
        if cusp.witnesses.is_empty() {
            return contract("a declared cusp needs at least one witness parabolic");
        }
        let mut elements = Vec::with_capacity(cusp.witnesses.len());
        for w in &cusp.witnesses {
            let g = w.evaluate(self)?;
            if g.classify() != IsometryKind::Parabolic {
                return contract(format!("witness {w} of cusp {:?} is not parabolic", p.chart()));
            }
            let gap = boundary_gap(&g.apply_boundary(p)?, p);
            if gap > CUSP_FIX_TOL {
                return contract(format!("witness {w} moves its cusp by {gap}"));
            }
            elements.push(g);
        }
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i + 1..] {
                if !a.commutes_with(b, 1e-9) {
                    return contract("witness parabolics of a cusp do not commute");
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[MobiusIsometry] {
        &self.generators
    }

    pub fn declared_cusps(&self) -> &[DeclaredCusp] {
        &self.declared_cusps
    }

    /// Smallest and largest declared cusp rank, if any cusp is declared.
    pub fn rank_range(&self) -> Option<(u32, u32)> {
        let ranks = self.declared_cusps.iter().map(|c| c.rank);
        Some((ranks.clone().min()?, ranks.max()?))
    }

    pub(crate) fn letter(&self, l: i8) -> Result<MobiusIsometry> {
        let i = l.unsigned_abs() as usize;
        if l == 0 || i > self.generators.len() {
            return contract(format!("letter {l} does not name a generator"));
        }
        Ok(if l > 0 { self.generators[i - 1] } else { self.inverses[i - 1] })
    }

    /// The conjugate presentation `h G h⁻¹`, with cusps moved by `h`.
    pub fn conjugated(&self, h: &MobiusIsometry) -> Result<Self> {
        let hinv = h.inverse();
        let generators = self.generators.iter().map(|g| (*h * *g * hinv).renormalized()).collect();
        let cusps = self
            .declared_cusps
            .iter()
            .map(|c| {
                Ok(DeclaredCusp { point: h.apply_boundary(&c.point)?, rank: c.rank, witnesses: c.witnesses.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(format!("{} (conjugated)", self.name), self.dim, generators, cusps)
    }
}
