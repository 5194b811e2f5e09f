//! SVG figures of the plane where windows live: `Pic_R` itself in Picard
//! rank 2, or `P̂ic_R` for a surface with five rays.
//!
//! Geometry stays exact until the last step. Coordinates are written with
//! six decimals, rounding half away from zero, so output bytes depend only
//! on the rationals.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use torex_core::bigjson;
use torex_core::cohomology::CohomologyEngine;
use torex_core::collections::ExceptionalCollection;
use torex_core::complex::RaySet;
use torex_core::exactlin::{dot, int_to_rat, rat, Rat};
use torex_core::geometry::{convex_hull_2d, lattice_points, zonotope_vertices, HPolyhedron, Zonotope};
use torex_core::picard::{pic_hat, PicHat};
use torex_core::windows::{build_p_hat, build_q};
use torex_core::{PicardGroup, Result, TorexError};

/// Display size of the longer viewport side, in pixels.
const DISPLAY: i64 = 600;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    /// Free coordinates of `Pic_R`, Picard rank 2.
    PicReal,
    /// `Pic_R / R·K`, surfaces with Picard rank 3.
    PicHat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Viewport {
    #[serde(with = "bigjson::rat_vec")]
    pub min: Vec<Rat>,
    #[serde(with = "bigjson::rat_vec")]
    pub max: Vec<Rat>,
}

impl Viewport {
    pub fn new(min: Vec<Rat>, max: Vec<Rat>) -> Result<Self> {
        if min.len() != 2 || max.len() != 2 {
            return Err(TorexError::InvalidArgument("viewport needs two coordinates per corner".into()));
        }
        if max[0] <= min[0] || max[1] <= min[1] {
            return Err(TorexError::InvalidArgument("viewport has zero size".into()));
        }
        Ok(Self { min, max })
    }

    /// `xmin,ymin,xmax,ymax`, each an integer or a fraction `p/q`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<Rat> = s
            .split(',')
            .map(|p| {
                bigjson::rat_from_str(p.trim())
                    .ok_or_else(|| TorexError::InvalidArgument(format!("bad viewport coordinate {p:?}")))
            })
            .collect::<Result<_>>()?;
        if parts.len() != 4 {
            return Err(TorexError::InvalidArgument("viewport is xmin,ymin,xmax,ymax".into()));
        }
        Self::new(parts[..2].to_vec(), parts[2..].to_vec())
    }

    fn corners(&self) -> Vec<Vec<Rat>> {
        let (a, b) = (&self.min, &self.max);
        vec![
            vec![a[0].clone(), a[1].clone()],
            vec![b[0].clone(), a[1].clone()],
            vec![b[0].clone(), b[1].clone()],
            vec![a[0].clone(), b[1].clone()],
        ]
    }

    fn contains(&self, p: &[Rat]) -> bool {
        (0..2).all(|j| self.min[j] <= p[j] && p[j] <= self.max[j])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    pub id: String,
    #[serde(with = "bigjson::rat_rows")]
    pub vertices: Vec<Vec<Rat>>,
}

/// A forbidden cone (projected when the plane is `P̂ic_R`) clipped to the
/// viewport.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wedge {
    pub subset: RaySet,
    #[serde(with = "bigjson::rat_rows")]
    pub region: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Figure {
    pub plane: Plane,
    pub viewport: Viewport,
    pub polygons: Vec<Polygon>,
    pub wedges: Vec<Wedge>,
    /// Images of lattice classes (for `P̂ic_R`, those with `|f| ≤ ½`).
    #[serde(with = "bigjson::rat_rows")]
    pub dots: Vec<Vec<Rat>>,
    #[serde(with = "bigjson::rat_rows")]
    pub collection: Vec<Vec<Rat>>,
}

fn plane_for(pic: &PicardGroup) -> Result<Plane> {
    let (k, d) = (pic.k(), pic.d());
    match (k, d) {
        (2, _) => Ok(Plane::PicReal),
        (3, 2) => Ok(Plane::PicHat),
        (k, 2) if k > 3 => Err(TorexError::UnsupportedDimension(k - 1)),
        _ => Err(TorexError::UnsupportedDimension(k)),
    }
}

fn hull(z: &Zonotope) -> Result<Vec<Vec<Rat>>> {
    let pts: Vec<Vec<Rat>> = zonotope_vertices(z)?.into_iter().map(|(p, _)| p).collect();
    Ok(convex_hull_2d(&pts))
}

/// Points of `poly` with `normal·(x - apex) ≥ 0`.
fn clip(poly: &[Vec<Rat>], normal: &[Rat], apex: &[Rat]) -> Vec<Vec<Rat>> {
    let side = |p: &[Rat]| dot(normal, p) - dot(normal, apex);
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for i in 0..poly.len() {
        let p = &poly[i];
        let q = &poly[(i + 1) % poly.len()];
        let (dp, dq) = (side(p), side(q));
        if !dp.is_negative() {
            out.push(p.clone());
        }
        if (dp.is_positive() && dq.is_negative()) || (dp.is_negative() && dq.is_positive()) {
            let t = &dp / (&dp - &dq);
            out.push(p.iter().zip(q).map(|(a, b)| a + (b - a) * &t).collect());
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// `apex + cone(gens)` intersected with the viewport.
fn wedge_region(apex: &[Rat], gens: &[Vec<Rat>], viewport: &Viewport) -> Vec<Vec<Rat>> {
    let gens: Vec<&Vec<Rat>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
    let mut region = viewport.corners();
    if gens.is_empty() {
        // the apex alone
        return if viewport.contains(apex) { vec![apex.to_vec()] } else { Vec::new() };
    }
    let mut normals: Vec<Vec<Rat>> = Vec::new();
    for g in &gens {
        for s in [rat(1), rat(-1)] {
            let n = vec![-&g[1] * &s, &g[0] * &s];
            if gens.iter().all(|h| !dot(&n, h).is_negative()) && !normals.contains(&n) {
                normals.push(n);
            }
        }
    }
    for n in &normals {
        region = clip(&region, n, apex);
        if region.is_empty() {
            break;
        }
    }
    region
}

fn bounding_viewport(points: &[Vec<Rat>]) -> Result<Viewport> {
    let mut min = points[0].clone();
    let mut max = points[0].clone();
    for p in points {
        for j in 0..2 {
            if p[j] < min[j] {
                min[j] = p[j].clone();
            }
            if p[j] > max[j] {
                max[j] = p[j].clone();
            }
        }
    }
    let side = (&max[0] - &min[0]).max(&max[1] - &min[1]);
    let pad = if side.is_zero() { Rat::one() } else { side / rat(4) };
    Viewport::new(
        min.iter().map(|x| x - &pad).collect(),
        max.iter().map(|x| x + &pad).collect(),
    )
}

fn hat_rows(hat: &PicHat, k: usize) -> Vec<Vec<Rat>> {
    // columns are the images of the unit vectors
    let cols: Vec<Vec<Rat>> = (0..k)
        .map(|j| {
            let mut e = vec![Rat::zero(); k];
            e[j] = Rat::one();
            hat.hat_of(&e)
        })
        .collect();
    (0..2).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

pub fn build_figure(
    engine: &CohomologyEngine,
    collection: &ExceptionalCollection,
    viewport: Option<Viewport>,
) -> Result<Figure> {
    let pic = engine.pic();
    let plane = plane_for(pic)?;
    let k = pic.k();
    let hat = match plane {
        Plane::PicHat => Some(pic_hat(pic)?),
        Plane::PicReal => None,
    };
    let project = |x: &[Rat]| -> Vec<Rat> {
        match &hat {
            Some(h) => h.hat_of(x),
            None => x.to_vec(),
        }
    };
    let polygons = match plane {
        Plane::PicReal => vec![Polygon {
            id: "window".into(),
            vertices: hull(&collection.window.zonotope)?,
        }],
        Plane::PicHat => {
            let (_, p_hat) = build_p_hat(pic, None)?;
            vec![
                Polygon {
                    id: "p-hat".into(),
                    vertices: hull(&p_hat)?,
                },
                Polygon {
                    id: "q".into(),
                    vertices: hull(&build_q(pic)?)?,
                },
            ]
        }
    };
    let cones: Vec<(RaySet, Vec<Rat>, Vec<Vec<Rat>>)> = engine
        .forbidden_cones()
        .iter()
        .map(|c| (c.subset, project(&c.apex), c.generators.iter().map(|g| project(g)).collect()))
        .collect();
    let points: Vec<Vec<Rat>> = collection.classes.iter().map(|c| project(&pic.real(c))).collect();
    let viewport = match viewport {
        Some(v) => v,
        None => {
            let mut all: Vec<Vec<Rat>> = polygons.iter().flat_map(|p| p.vertices.clone()).collect();
            all.extend(points.iter().cloned());
            all.extend(cones.iter().map(|(_, a, _)| a.clone()));
            bounding_viewport(&all)?
        }
    };
    let wedges = cones
        .iter()
        .map(|(subset, apex, gens)| Wedge {
            subset: *subset,
            region: wedge_region(apex, gens, &viewport),
        })
        .collect();
    let dots = lattice_dots(&viewport, hat.as_ref(), &collection.window.f, k)?;
    Ok(Figure {
        plane,
        viewport,
        polygons,
        wedges,
        dots,
        collection: points,
    })
}

fn lattice_dots(viewport: &Viewport, hat: Option<&PicHat>, f: &[Rat], k: usize) -> Result<Vec<Vec<Rat>>> {
    let mut p = HPolyhedron::new(k);
    let rows = match hat {
        Some(h) => {
            let half = Rat::new(BigInt::one(), BigInt::from(2));
            p.push_slab(f, &-half.clone(), &half)?;
            hat_rows(h, k)
        }
        None => (0..2)
            .map(|j| (0..2).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect(),
    };
    for (j, row) in rows.iter().enumerate() {
        p.push_slab(row, &viewport.min[j], &viewport.max[j])?;
    }
    let mut out: Vec<Vec<Rat>> = lattice_points(&p)?
        .into_iter()
        .map(|x| {
            let x = int_to_rat(&x);
            rows.iter().map(|r| dot(r, &x)).collect()
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// `x` to six decimals, halves rounded away from zero.
pub fn fixed6(x: &Rat) -> String {
    let scale = BigInt::from(1_000_000);
    let m = x.abs() * Rat::from_integer(scale.clone());
    let q = (m + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    let (int, frac) = q.div_rem(&scale);
    let sign = if x.is_negative() && !q.is_zero() { "-" } else { "" };
    format!("{sign}{int}.{frac:0>6}")
}

struct Screen {
    min: Vec<Rat>,
    max: Vec<Rat>,
    scale: Rat,
}

impl Screen {
    fn new(v: &Viewport) -> Self {
        let side = (&v.max[0] - &v.min[0]).max(&v.max[1] - &v.min[1]);
        Screen {
            min: v.min.clone(),
            max: v.max.clone(),
            scale: rat(DISPLAY) / side,
        }
    }

    // y grows downwards on screen
    fn point(&self, p: &[Rat]) -> String {
        let x = (&p[0] - &self.min[0]) * &self.scale;
        let y = (&self.max[1] - &p[1]) * &self.scale;
        format!("{},{}", fixed6(&x), fixed6(&y))
    }

    fn size(&self) -> (String, String) {
        (
            fixed6(&((&self.max[0] - &self.min[0]) * &self.scale)),
            fixed6(&((&self.max[1] - &self.min[1]) * &self.scale)),
        )
    }
}

fn subset_id(s: RaySet) -> String {
    let parts: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    if parts.is_empty() {
        "wedge-empty".into()
    } else {
        format!("wedge-{}", parts.join("-"))
    }
}

/// SVG 1.1 document for the figure.
pub fn render_svg(fig: &Figure) -> String {
    let screen = Screen::new(&fig.viewport);
    let (w, h) = screen.size();
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff" stroke="#000000" stroke-width="1"/>"##);
    let _ = writeln!(s, r##"<g id="forbidden-cones" fill="#d62728" fill-opacity="0.15" stroke="#d62728" stroke-width="1">"##);
    for wedge in &fig.wedges {
        let d = if wedge.region.is_empty() {
            String::new()
        } else {
            let pts: Vec<String> = wedge.region.iter().map(|p| screen.point(p)).collect();
            format!("M {} Z", pts.join(" L "))
        };
        let _ = writeln!(s, r#"<path id="{}" class="wedge" d="{d}"/>"#, subset_id(wedge.subset));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="windows" fill="none" stroke-width="2">"#);
    for (i, poly) in fig.polygons.iter().enumerate() {
        let color = ["#1f77b4", "#2ca02c"][i % 2];
        let pts: Vec<String> = poly.vertices.iter().map(|p| screen.point(p)).collect();
        let _ = writeln!(s, r#"<polygon id="{}" stroke="{color}" points="{}"/>"#, poly.id, pts.join(" "));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g id="classes" fill="#555555">"##);
    for p in &fig.dots {
        let xy = screen.point(p);
        let (x, y) = xy.split_once(',').unwrap();
        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="1.5"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g id="collection" fill="#ff7f0e" stroke="#000000" stroke-width="0.5">"##);
    for p in &fig.collection {
        let xy = screen.point(p);
        let (x, y) = xy.split_once(',').unwrap();
        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="4"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
