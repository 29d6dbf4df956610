//! Geometric realization of 1- and 2-trusses and deterministic SVG output.
//!
//! Every element takes the coordinate given by its position in the linear
//! fiber order, so closed singular elements sit at even positions `2i` and
//! closed regular elements at odd positions `2i + 1`, with the roles
//! swapped for open fibers.  Level 1 realizes vertically, level 2
//! horizontally within each slice, and wires interpolate linearly between
//! their slice coordinate and their attachment in the adjacent singular
//! slices.  Open trusses are clipped to a bounding box padded by one unit.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::fiber::{fiber_index, FiberElement, Flavor};
use crate::label::Label;
use crate::tower::TrussTower;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub scale: f64,
    pub stroke_width: f64,
    pub marker_radius: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 24.0,
            stroke_width: 1.5,
            marker_radius: 3.5,
        }
    }
}

/// A 0-dimensional stratum: a marked point.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub path: String,
    pub at: (f64, f64),
    pub label: Option<Label>,
}

/// A 1-dimensional stratum as a polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Wire {
    pub path: String,
    pub points: Vec<(f64, f64)>,
    pub label: Option<Label>,
}

/// A 2-dimensional stratum as a fill polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub path: String,
    pub outline: Vec<(f64, f64)>,
    pub label: Option<Label>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizedDiagram {
    pub dim: usize,
    /// `(min x, min y, max x, max y)` in abstract units.
    pub bbox: (f64, f64, f64, f64),
    pub vertices: Vec<Vertex>,
    pub wires: Vec<Wire>,
    pub regions: Vec<Region>,
}

fn coord(flavor: Flavor, n: usize, el: FiberElement) -> f64 {
    fiber_index(flavor, n, el) as f64
}

/// Realize a truss of dimension at most 2 over the point.
pub fn realize(t: &TrussTower) -> Result<RealizedDiagram, String> {
    if t.base.len() != 1 {
        return Err("realization applies to trusses over the point".to_string());
    }
    match t.dim() {
        0 => realize_point(t),
        1 => realize_line(t),
        2 => realize_plane(t),
        d => Err(format!("cannot realize a {d}-truss; take slices first")),
    }
}

fn realize_point(t: &TrussTower) -> Result<RealizedDiagram, String> {
    let open = t.flavor == Flavor::Open;
    let r = if open { 1.0 } else { 0.0 };
    let outline = if open {
        alloc::vec![(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
    } else {
        alloc::vec![(0.0, 0.0)]
    };
    Ok(RealizedDiagram {
        dim: 0,
        bbox: (-r, -r, r, r),
        vertices: Vec::new(),
        wires: Vec::new(),
        regions: alloc::vec![Region {
            path: t.top_path_string(0),
            outline,
            label: t.label(0).cloned(),
        }],
    })
}

fn realize_line(t: &TrussTower) -> Result<RealizedDiagram, String> {
    let lvl = &t.levels[0];
    let m = lvl.fiber_len[0];
    let open = t.flavor == Flavor::Open;
    let mut vertices = Vec::new();
    let mut wires = Vec::new();
    for idx in 0..lvl.total_len() {
        let (_, el) = lvl.element(idx);
        let y = coord(t.flavor, m, el);
        let path = t.top_path_string(idx);
        let label = t.label(idx).cloned();
        match el {
            FiberElement::Sing(_) => vertices.push(Vertex {
                path,
                at: (0.0, y),
                label,
            }),
            // A regular element spans the interval between its singular
            // neighbours; at an open end that is exactly the padded clip.
            FiberElement::Reg(_) => wires.push(Wire {
                path,
                points: alloc::vec![(0.0, y - 1.0), (0.0, y + 1.0)],
                label,
            }),
        }
    }
    let top = 2.0 * m as f64;
    let bbox = if open {
        (0.0, -1.0, 0.0, top + 1.0)
    } else {
        (0.0, 0.0, 0.0, top)
    };
    Ok(RealizedDiagram {
        dim: 1,
        bbox,
        vertices,
        wires,
        regions: Vec::new(),
    })
}

/// Horizontal attachment of the wire `Sing(j)` of a regular slice inside
/// the adjacent singular slice `p`, via the transition between them.
fn attachment(
    t: &TrussTower,
    p: usize,
    b: usize,
    j: usize,
    fallback: f64,
) -> Result<f64, String> {
    let l2 = &t.levels[1];
    let tr = l2
        .transition(p, b)
        .ok_or_else(|| format!("missing transition between slices {p} and {b}"))?;
    let n_p = l2.fiber_len[p];
    match t.flavor {
        // The transition runs singular-to-regular; the wire attaches to
        // the singular element whose span covers it, if any.
        Flavor::Open => Ok((0..n_p)
            .find(|&u| tr.at(u) <= j && j < tr.at(u + 1))
            .map(|u| coord(Flavor::Open, n_p, FiberElement::Sing(u)))
            .unwrap_or(fallback)),
        // The transition runs regular-to-singular and is total.
        Flavor::Closed => Ok(coord(
            Flavor::Closed,
            n_p,
            FiberElement::Sing(tr.at(j)),
        )),
    }
}

fn realize_plane(t: &TrussTower) -> Result<RealizedDiagram, String> {
    let flavor = t.flavor;
    let open = flavor == Flavor::Open;
    let l1 = &t.levels[0];
    let l2 = &t.levels[1];
    let m1 = l1.fiber_len[0];
    let slices = l1.total_len();
    let content_x = (0..slices)
        .map(|b| 2 * l2.fiber_len[b])
        .max()
        .unwrap_or(0) as f64;
    let (minx, maxx) = if open { (-1.0, content_x + 1.0) } else { (0.0, content_x) };
    let (miny, maxy) = if open {
        (-1.0, 2.0 * m1 as f64 + 1.0)
    } else {
        (0.0, 2.0 * m1 as f64)
    };

    let mut vertices = Vec::new();
    let mut wires = Vec::new();
    let mut regions = Vec::new();
    // Polylines of vertical wires, kept for the region outlines.
    let mut wire_pts: BTreeMap<(usize, usize), Vec<(f64, f64)>> = BTreeMap::new();

    for b in 0..slices {
        let (_, slice_el) = l1.element(b);
        let y = coord(flavor, m1, slice_el);
        let n_b = l2.fiber_len[b];
        if let FiberElement::Reg(_) = slice_el {
            // Open fibers carry singular heights 0..n, closed ones 0..=n.
            let sings = if open { n_b } else { n_b + 1 };
            for j in 0..sings {
                let x = coord(flavor, n_b, FiberElement::Sing(j));
                let below = if b > 0 {
                    attachment(t, b - 1, b, j, x)?
                } else {
                    x
                };
                let above = if b + 1 < slices {
                    attachment(t, b + 1, b, j, x)?
                } else {
                    x
                };
                wire_pts.insert(
                    (b, j),
                    alloc::vec![(below, y - 1.0), (x, y), (above, y + 1.0)],
                );
            }
        }
    }

    for idx in 0..l2.total_len() {
        let (b, el) = l2.element(idx);
        {
            let (_, slice_el) = l1.element(b);
            let y = coord(flavor, m1, slice_el);
            let n_b = l2.fiber_len[b];
            let path = t.top_path_string(idx);
            let label = t.label(idx).cloned();
            let x = coord(flavor, n_b, el);
            match (slice_el, el) {
                (FiberElement::Sing(_), FiberElement::Sing(_)) => vertices.push(Vertex {
                    path,
                    at: (x, y),
                    label,
                }),
                // Regular element of a singular slice: a horizontal wire
                // between its singular neighbours, or out to the clip.
                (FiberElement::Sing(_), FiberElement::Reg(j)) => {
                    let lo = if open && j == 0 { minx } else { x - 1.0 };
                    let hi = if open && j == n_b { maxx } else { x + 1.0 };
                    wires.push(Wire {
                        path,
                        points: alloc::vec![(lo, y), (hi, y)],
                        label,
                    });
                }
                (FiberElement::Reg(_), FiberElement::Sing(j)) => wires.push(Wire {
                    path,
                    points: wire_pts[&(b, j)].clone(),
                    label,
                }),
                // Regular-regular: a region bounded by the neighbouring
                // wire polylines (or the clip) and the slice heights.
                (FiberElement::Reg(_), FiberElement::Reg(j)) => {
                    let side = |wire: Option<&Vec<(f64, f64)>>, edge: f64| match wire {
                        Some(pts) => pts.clone(),
                        None => alloc::vec![(edge, y - 1.0), (edge, y + 1.0)],
                    };
                    let (lw, rw) = match flavor {
                        Flavor::Open => (
                            j.checked_sub(1).and_then(|i| wire_pts.get(&(b, i))),
                            wire_pts.get(&(b, j)),
                        ),
                        Flavor::Closed => (wire_pts.get(&(b, j)), wire_pts.get(&(b, j + 1))),
                    };
                    let mut outline = side(lw, minx);
                    let mut right = side(rw, maxx);
                    right.reverse();
                    outline.extend(right);
                    regions.push(Region {
                        path,
                        outline,
                        label,
                    });
                }
            }
        }
    }

    Ok(RealizedDiagram {
        dim: 2,
        bbox: (minx, miny, maxx, maxy),
        vertices,
        wires,
        regions,
    })
}

/// Realize every level-1 slice of a truss of dimension 1 to 3, for
/// rendering higher trusses one slice at a time.
pub fn slices(t: &TrussTower) -> Result<Vec<(String, RealizedDiagram)>, String> {
    if t.dim() == 0 || t.dim() > 3 {
        return Err(format!("cannot slice a {}-truss for rendering", t.dim()));
    }
    let mut out = Vec::new();
    for b in 0..t.levels[0].total_len() {
        let slice = t.slice_above(1, b)?;
        out.push((
            t.path_string(&t.element_path(1, b)),
            realize(&slice)?,
        ));
    }
    Ok(out)
}

const REGION_FILLS: [&str; 8] = [
    "#eef2f7", "#dbeafe", "#dcfce7", "#fee2e2", "#fef9c3", "#ede9fe", "#fce7f3", "#e0f2fe",
];
const WIRE_STROKES: [&str; 8] = [
    "#1f2937", "#1d4ed8", "#15803d", "#b91c1c", "#a16207", "#6d28d9", "#be185d", "#0369a1",
];

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn num(v: f64) -> String {
    let i = v as i64;
    if i as f64 == v {
        format!("{i}")
    } else {
        format!("{v}")
    }
}

/// Deterministic SVG for a realized diagram: fixed scale, declared
/// viewBox, palette ranked by label text, second axis upward.
pub fn emit_svg(d: &RealizedDiagram, options: &RenderOptions) -> String {
    let margin = 0.5;
    let (minx, miny, maxx, maxy) = d.bbox;
    let s = options.scale;
    let gx = |x: f64| (x - minx + margin) * s;
    let gy = |y: f64| (maxy - y + margin) * s;
    let width = (maxx - minx + 2.0 * margin) * s;
    let height = (maxy - miny + 2.0 * margin) * s;

    let mut keys: BTreeSet<String> = BTreeSet::new();
    for l in d
        .regions
        .iter()
        .map(|r| &r.label)
        .chain(d.wires.iter().map(|w| &w.label))
        .chain(d.vertices.iter().map(|v| &v.label))
        .flatten()
    {
        keys.insert(l.to_string());
    }
    let rank = |l: &Option<Label>, pal: &[&str; 8], fallback: &'static str| -> String {
        match l {
            None => fallback.to_string(),
            Some(l) => {
                let k = l.to_string();
                let i = keys.iter().position(|x| *x == k).unwrap_or(0);
                pal[i % pal.len()].to_string()
            }
        }
    };

    let pts = |points: &[(f64, f64)]| -> String {
        let mut out = String::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&num(gx(x)));
            out.push(',');
            out.push_str(&num(gy(y)));
        }
        out
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        num(width),
        num(height),
        num(width),
        num(height)
    ));
    svg.push_str("  <g class=\"regions\" stroke=\"none\">\n");
    for r in &d.regions {
        svg.push_str(&format!(
            "    <polygon points=\"{}\" fill=\"{}\"><title>{}</title></polygon>\n",
            pts(&r.outline),
            rank(&r.label, &REGION_FILLS, "#f6f6f4"),
            esc(&r.path)
        ));
    }
    svg.push_str("  </g>\n  <g class=\"wires\" fill=\"none\" stroke-linecap=\"round\">\n");
    for w in &d.wires {
        svg.push_str(&format!(
            "    <polyline points=\"{}\" stroke=\"{}\" stroke-width=\"{}\"><title>{}</title></polyline>\n",
            pts(&w.points),
            rank(&w.label, &WIRE_STROKES, "#374151"),
            num(options.stroke_width),
            esc(&w.path)
        ));
    }
    svg.push_str("  </g>\n  <g class=\"vertices\" stroke=\"none\">\n");
    for v in &d.vertices {
        svg.push_str(&format!(
            "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"><title>{}</title></circle>\n",
            num(gx(v.at.0)),
            num(gy(v.at.1)),
            num(options.marker_radius),
            rank(&v.label, &WIRE_STROKES, "#111827"),
            esc(&v.path)
        ));
    }
    svg.push_str("  </g>\n</svg>\n");
    svg
}
