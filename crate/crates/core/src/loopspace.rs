//! Transport of a gerbe over the based loop space: homotopies between
//! edge loops act by the flag sum over the open cylinder they sweep.
//!
//! Boundary edges and vertices always take their lowest chart, which
//! trivialises the transgressed line over each loop; interior face charts
//! are free and do not change the phase.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use crate::cover::{CellComplex, ChartId};
use crate::double::{check_transport_law, LawReport, PhaseDouble};
use crate::error::{Error, Result};
use crate::gerbe::{boundary, flag_sum, FlagSum, GerbeData, SurfaceAssignment};
use crate::groupoid::{Groupoid, PhaseArrow, PhaseGroupoid};
use crate::paths::{EdgePath, EdgeStep};
use crate::phase::Phase;

/// Thin class of a based loop: its base vertex and reduced edge word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LoopClass {
    pub base: usize,
    pub word: Vec<(usize, i8)>,
}

impl LoopClass {
    pub fn of(path: &EdgePath) -> Result<Self> {
        if !path.is_closed() {
            return Err(Error::NotClosed(format!("path {} → {} is not a loop", path.start(), path.end())));
        }
        let (base, _, word) = path.thin_class();
        Ok(LoopClass { base, word })
    }

    pub fn path(&self, complex: &CellComplex) -> Result<EdgePath> {
        EdgePath::new(complex, self.base, self.word.iter().map(|&(e, s)| EdgeStep::new(e, s)).collect())
    }

    /// Edge → net multiplicity.
    pub fn chain(&self) -> BTreeMap<usize, i64> {
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        for &(e, s) in &self.word {
            *out.entry(e).or_default() += i64::from(s);
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// A combinatorial homotopy of based loops `γ ⇒ μ`: a list of signed faces
/// whose boundary is `μ − γ`, the sides being constant at the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    pub source: LoopClass,
    pub target: LoopClass,
    pub faces: Vec<(usize, i8)>,
}

impl Homotopy {
    pub fn new(complex: &CellComplex, source: &EdgePath, target: &EdgePath, faces: Vec<(usize, i8)>) -> Result<Self> {
        let source = LoopClass::of(source)?;
        let target = LoopClass::of(target)?;
        Self::from_classes(complex, source, target, faces)
    }

    pub fn from_classes(complex: &CellComplex, source: LoopClass, target: LoopClass, faces: Vec<(usize, i8)>) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::InvalidSurface(format!(
                "loops are based at {} and {}",
                source.base, target.base
            )));
        }
        if let Some(&(f, m)) = faces.iter().find(|&&(f, m)| f >= complex.face_count() || (m != 1 && m != -1)) {
            return Err(Error::InvalidSurface(format!("({f}, {m}) is not a signed face")));
        }
        let mut want = target.chain();
        for (e, c) in source.chain() {
            *want.entry(e).or_default() -= c;
        }
        want.retain(|_, c| *c != 0);
        let got = boundary(complex, &faces);
        if got != want {
            return Err(Error::InvalidSurface(format!(
                "face boundary {got:?} is not μ − γ = {want:?}"
            )));
        }
        Ok(Homotopy { source, target, faces })
    }

    pub fn identity(loop_class: LoopClass) -> Self {
        Homotopy {
            source: loop_class.clone(),
            target: loop_class,
            faces: Vec::new(),
        }
    }

    /// Stacking `self` then `other`.
    pub fn stack(&self, other: &Homotopy) -> Result<Homotopy> {
        if self.target != other.source {
            return Err(Error::NonComposable(format!(
                "target {:?} vs source {:?}",
                self.target, other.source
            )));
        }
        let mut faces = self.faces.clone();
        faces.extend_from_slice(&other.faces);
        Ok(Homotopy {
            source: self.source.clone(),
            target: other.target.clone(),
            faces,
        })
    }

    pub fn inverse(&self) -> Homotopy {
        Homotopy {
            source: self.target.clone(),
            target: self.source.clone(),
            faces: self.faces.iter().rev().map(|&(f, m)| (f, -m)).collect(),
        }
    }

    /// Inserts `f f⁻¹`: same loops, same net chain.
    pub fn padded(&self, at: usize, face: usize) -> Homotopy {
        let mut out = self.clone();
        let at = at.min(out.faces.len());
        out.faces.insert(at, (face, -1));
        out.faces.insert(at, (face, 1));
        out
    }

    /// Net multiplicity of each face.
    pub fn chain(&self) -> BTreeMap<usize, i64> {
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        for &(f, m) in &self.faces {
            *out.entry(f).or_default() += i64::from(m);
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// An arrow `γ → μ` of the cylindrical groupoid with its transport.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopSpaceArrow {
    pub source: LoopClass,
    pub target: LoopClass,
    pub phase: Phase,
    /// Face, edge and vertex parts of the flag sum, in turns. The section
    /// over `γ` is carried to the section over `μ` times `exp(2πi·total)`.
    pub parts: FlagSum,
}

impl LoopSpaceArrow {
    pub fn as_phase_arrow(&self) -> PhaseArrow<LoopClass> {
        PhaseArrow {
            source: self.source.clone(),
            target: self.target.clone(),
            phase: self.phase,
        }
    }
}

/// Loop transport with the lowest chart on every cell.
pub fn loop_transport(gerbe: &GerbeData, h: &Homotopy) -> Result<LoopSpaceArrow> {
    let charts = SurfaceAssignment::canonical(gerbe, &h.faces)?.faces;
    loop_transport_with(gerbe, h, charts)
}

/// Loop transport with the given chart for each face occurrence.
pub fn loop_transport_with(gerbe: &GerbeData, h: &Homotopy, face_charts: Vec<ChartId>) -> Result<LoopSpaceArrow> {
    let report = gerbe.validate();
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidGerbe(format!("{} fails at {}", v.relation, v.location)));
    }
    let mut asg = SurfaceAssignment::canonical(gerbe, &h.faces)?;
    if face_charts.len() != h.faces.len() {
        return Err(Error::InvalidAssignment("one chart per face occurrence is needed".into()));
    }
    asg.faces = face_charts;
    asg.check(gerbe, &h.faces)?;
    let parts = flag_sum(gerbe, &h.faces, &asg);
    Ok(LoopSpaceArrow {
        source: h.source.clone(),
        target: h.target.clone(),
        phase: Phase::from_ratio(parts.total()),
        parts,
    })
}

/// The cylindrical groupoid on loop classes: arrows are homotopies,
/// composed by stacking, equal when they have the same net face chain.
#[derive(Clone, Debug)]
pub struct CylinderGroupoid {
    pub gerbe: Arc<GerbeData>,
}

impl Groupoid for CylinderGroupoid {
    type Object = LoopClass;
    type Arrow = Homotopy;

    fn source(&self, a: &Homotopy) -> LoopClass {
        a.source.clone()
    }
    fn target(&self, a: &Homotopy) -> LoopClass {
        a.target.clone()
    }
    fn identity(&self, x: &LoopClass) -> Homotopy {
        Homotopy::identity(x.clone())
    }
    fn inverse(&self, a: &Homotopy) -> Homotopy {
        a.inverse()
    }
    fn compose(&self, g: &Homotopy, h: &Homotopy) -> Result<Homotopy> {
        g.stack(h)
    }
    fn arrows_equal(&self, a: &Homotopy, b: &Homotopy) -> bool {
        a.source == b.source && a.target == b.target && a.chain() == b.chain()
    }
}

/// Cyclic subgroup of phases generated at one loop, in turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhaseSubgroup {
    pub generator: Rational64,
    pub order: i64,
}

impl PhaseSubgroup {
    /// The subgroup of `Q/Z` generated by `phases`.
    pub fn generated_by(phases: &[Rational64]) -> Self {
        let den = phases.iter().fold(1i64, |d, p| d.lcm(p.denom()));
        let g = phases
            .iter()
            .fold(den, |g, p| g.gcd(&(p * den).to_integer().rem_euclid(den)));
        let generator = Rational64::new(g, den);
        PhaseSubgroup {
            generator: if generator == Rational64::from_integer(1) {
                Rational64::zero()
            } else {
                generator
            },
            order: *generator.denom(),
        }
    }
}

/// Everything built from a finite family of loops and homotopies.
pub struct LoopSpaceGroupoids {
    pub objects: Vec<LoopClass>,
    /// The family closed under one round of stacking, with inverses and
    /// identities.
    pub arrows: Vec<Homotopy>,
    pub transports: Vec<LoopSpaceArrow>,
    /// Distinct `(γ, μ, phase)` classes: the thin quotient.
    pub quotient: Vec<PhaseArrow<LoopClass>>,
    /// Phases of closed arrows at each loop generate this subgroup.
    pub vertex_phases: BTreeMap<LoopClass, PhaseSubgroup>,
    pub double: PhaseDouble<CylinderGroupoid>,
    /// `q(H⋆H′) = q(H)·q(H′)` over every composable pair.
    pub quotient_morphism: LawReport,
}

impl LoopSpaceGroupoids {
    pub fn quotient_groupoid(&self) -> PhaseGroupoid<LoopClass> {
        PhaseGroupoid::new(1e-12)
    }

    /// Composable pairs of the arrow list, up to `limit`.
    pub fn composable_pairs(&self, limit: usize) -> Vec<(Homotopy, Homotopy)> {
        let mut out = Vec::new();
        for a in &self.arrows {
            for b in &self.arrows {
                if a.target == b.source {
                    out.push((a.clone(), b.clone()));
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// Runs the transport-law sweep for the connection pair `(Υ, Hol)`
    /// with `Hol = q`.
    pub fn check_connection_pair(&self, limit: usize) -> LawReport {
        let gerbe = self.double_gerbe();
        let hol = move |h: &Homotopy| -> PhaseArrow<LoopClass> {
            match loop_transport(&gerbe, h) {
                Ok(a) => a.as_phase_arrow(),
                Err(_) => PhaseArrow {
                    source: h.source.clone(),
                    target: h.target.clone(),
                    phase: Phase::from_radians(f64::NAN),
                },
            }
        };
        let cp = self.double.connection_pair(hol);
        check_transport_law(&cp, &self.double, &self.composable_pairs(limit))
    }

    fn double_gerbe(&self) -> Arc<GerbeData> {
        use crate::double::DoubleGroupoid;
        self.double.vertical().gerbe.clone()
    }
}

/// Builds the cylindrical groupoid on a curated family, its thin
/// quotient, the vertex phase subgroups and the double groupoid.
pub fn loop_space_groupoids(gerbe: &GerbeData, loops: &[EdgePath], homotopies: &[Homotopy]) -> Result<LoopSpaceGroupoids> {
    let objects: Vec<LoopClass> = loops.iter().map(LoopClass::of).collect::<Result<_>>()?;
    let known: BTreeSet<&LoopClass> = objects.iter().collect();
    for h in homotopies {
        for end in [&h.source, &h.target] {
            if !known.contains(end) {
                return Err(Error::FamilyNotClosed(format!("homotopy ends at {end:?}, outside the loop family")));
            }
        }
    }
    let mut arrows: Vec<Homotopy> = objects.iter().cloned().map(Homotopy::identity).collect();
    for h in homotopies {
        arrows.push(h.clone());
        arrows.push(h.inverse());
    }
    let base = arrows.clone();
    for a in &base {
        for b in &base {
            if a.target == b.source && !a.faces.is_empty() && !b.faces.is_empty() {
                arrows.push(a.stack(b)?);
            }
        }
    }
    let transports: Vec<LoopSpaceArrow> = arrows.iter().map(|h| loop_transport(gerbe, h)).collect::<Result<_>>()?;

    let mut quotient: Vec<PhaseArrow<LoopClass>> = Vec::new();
    let pg = PhaseGroupoid::new(1e-12);
    for t in &transports {
        let q = t.as_phase_arrow();
        if !quotient.iter().any(|x| pg.arrows_equal(x, &q)) {
            quotient.push(q);
        }
    }

    let mut vertex_phases = BTreeMap::new();
    for x in &objects {
        let phases: Vec<Rational64> = transports
            .iter()
            .filter(|t| &t.source == x && &t.target == x)
            .map(|t| t.parts.total())
            .collect();
        vertex_phases.insert(x.clone(), PhaseSubgroup::generated_by(&phases));
    }

    let mut quotient_morphism = LawReport::new("q(H⋆H′) = q(H)·q(H′)");
    let mut idx = 0;
    for (i, a) in arrows.iter().enumerate() {
        for (j, b) in arrows.iter().enumerate() {
            if a.target != b.source {
                continue;
            }
            let lhs = loop_transport(gerbe, &a.stack(b)?)?.as_phase_arrow();
            let rhs = pg.compose(&transports[i].as_phase_arrow(), &transports[j].as_phase_arrow())?;
            quotient_morphism.record(idx, pg.arrows_equal(&lhs, &rhs), || format!("H = #{i}, H′ = #{j}"));
            idx += 1;
        }
    }

    let double = PhaseDouble::new(
        CylinderGroupoid {
            gerbe: Arc::new(gerbe.clone()),
        },
        1e-12,
    );
    Ok(LoopSpaceGroupoids {
        objects,
        arrows,
        transports,
        quotient,
        vertex_phases,
        double,
        quotient_morphism,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_subgroup_of_rationals() {
        let g = PhaseSubgroup::generated_by(&[Rational64::new(1, 4), Rational64::new(1, 6)]);
        assert_eq!(g.generator, Rational64::new(1, 12));
        assert_eq!(g.order, 12);
        let t = PhaseSubgroup::generated_by(&[]);
        assert_eq!((t.generator, t.order), (Rational64::zero(), 1));
    }

    #[test]
    fn sweeping_the_torus_transports_by_the_flux() {
        let phi = Rational64::new(1, 3);
        let g = GerbeData::flat_torus(2, 2, phi).unwrap();
        let c = g.complex();
        let a = EdgePath::through(c, &[0, 1, 0]).unwrap();
        let all: Vec<(usize, i8)> = (0..c.face_count()).map(|f| (f, 1)).collect();
        let h = Homotopy::new(c, &a, &a, all).unwrap();
        assert_eq!(loop_transport(&g, &h).unwrap().phase, Phase::from_ratio(phi));
        assert!(matches!(
            Homotopy::new(c, &a, &a, vec![(0, 1)]),
            Err(Error::InvalidSurface(_))
        ));
    }
}
