//! Random and hand-picked test regions.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::domain::{Point, ToricProfile};
use crate::rational::{q, qi, Q};

fn rand_q<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Q {
    q(rng.gen_range(lo * den..=hi * den), den)
}

/// Concave region: edges `(−pᵢ, qᵢ)` with strictly increasing `qᵢ/pᵢ`, so the
/// boundary only turns right.
pub fn random_concave<R: Rng>(rng: &mut R, max_edges: usize) -> ToricProfile {
    let edges = rng.gen_range(1..=max_edges.max(1));
    let mut dirs: Vec<(i64, i64)> = Vec::new();
    while dirs.len() < edges {
        let d = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        if dirs.iter().all(|e| e.1 * d.0 != d.1 * e.0) {
            dirs.push(d);
        }
    }
    dirs.sort_by(|a, b| (a.1 * b.0).cmp(&(b.1 * a.0)));
    let lens: Vec<Q> = (0..edges).map(|_| rand_q(rng, 1, 3, 4).max(q(1, 4))).collect();
    let width: Q = dirs.iter().zip(&lens).map(|(d, l)| l * qi(d.0)).sum();
    let mut p = Point::new(width, qi(0));
    let mut verts = vec![p.clone()];
    for (d, l) in dirs.iter().zip(&lens) {
        p = Point::new(&p.x - l * qi(d.0), &p.y + l * qi(d.1));
        verts.push(p.clone());
    }
    verts.last_mut().unwrap().x = qi(0);
    ToricProfile::new(verts).expect("concave construction is star-shaped")
}

fn cross3(o: &Point, a: &Point, b: &Point) -> Q {
    a.sub(o).cross(&b.sub(o))
}

/// Convex region: the hull of `O`, `(r,0)`, `(0,s)` and random points of the
/// open box `(0,r) × (0,s)`.
pub fn random_convex<R: Rng>(rng: &mut R, max_points: usize) -> ToricProfile {
    let r = rand_q(rng, 1, 3, 2).max(q(1, 2));
    let s = rand_q(rng, 1, 3, 2).max(q(1, 2));
    let n = rng.gen_range(0..=max_points);
    let mut pts = vec![Point::new(r.clone(), qi(0)), Point::new(qi(0), s.clone())];
    for _ in 0..n {
        let x = q(rng.gen_range(1..12), 12) * &r;
        let y = q(rng.gen_range(1..12), 12) * &s;
        pts.push(Point::new(x, y));
    }
    // upper hull from (r,0) counterclockwise to (0,s): sort by angle
    // around the origin, then keep left turns only
    pts.sort_by(|a, b| {
        let c = a.cross(b);
        if c > qi(0) {
            std::cmp::Ordering::Less
        } else if c < qi(0) {
            std::cmp::Ordering::Greater
        } else {
            (&a.x * &a.x + &a.y * &a.y).cmp(&(&b.x * &b.x + &b.y * &b.y))
        }
    });
    // among points on one ray keep the farthest
    let mut rays: Vec<Point> = Vec::new();
    for p in pts {
        if let Some(last) = rays.last() {
            if last.cross(&p) == qi(0) {
                rays.pop();
            }
        }
        rays.push(p);
    }
    let mut hull: Vec<Point> = Vec::new();
    for p in rays {
        while hull.len() >= 2 && cross3(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= qi(0) {
            hull.pop();
        }
        hull.push(p);
    }
    ToricProfile::new(hull).expect("convex hull chain is star-shaped")
}

/// Star-shaped region with `vertices` interior vertices on rays of strictly
/// increasing slope and random radii.
pub fn random_star<R: Rng>(rng: &mut R, vertices: usize) -> ToricProfile {
    loop {
        let mut dirs: Vec<(i64, i64)> = Vec::new();
        while dirs.len() < vertices {
            let d = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            if dirs.iter().all(|e| e.1 * d.0 != d.1 * e.0) {
                dirs.push(d);
            }
        }
        dirs.sort_by(|a, b| (a.1 * b.0).cmp(&(b.1 * a.0)));
        let mut verts = vec![Point::new(rand_q(rng, 1, 3, 3).max(q(1, 3)), qi(0))];
        for d in &dirs {
            let t = q(rng.gen_range(2..=9), 6 * d.0.max(d.1));
            verts.push(Point::new(&t * qi(d.0), &t * qi(d.1)));
        }
        verts.push(Point::new(qi(0), rand_q(rng, 1, 3, 3).max(q(1, 3))));
        if let Ok(p) = ToricProfile::new(verts) {
            return p;
        }
    }
}

/// `(a,0),(a,b),(c,b),(c,d),(0,d)`.
pub fn lshape(a: Q, b: Q, c: Q, d: Q) -> ToricProfile {
    let z = qi(0);
    ToricProfile::new(vec![
        Point::new(a.clone(), z.clone()),
        Point::new(a, b.clone()),
        Point::new(c.clone(), b),
        Point::new(c, d.clone()),
        Point::new(z, d),
    ])
    .expect("valid L-shape parameters")
}

/// Regions chosen to be nice (no collisions, no degenerate critical edges)
/// for actions below 9/2.
pub fn nice_profiles() -> Vec<ToricProfile> {
    vec![
        ToricProfile::polydisk(qi(1), q(13, 8)).unwrap(),
        ToricProfile::ellipsoid(qi(1), q(13, 8)).unwrap(),
        ToricProfile::new(vec![
            Point::new(q(3, 2), qi(0)),
            Point::new(q(7, 5), q(4, 3)),
            Point::new(q(2, 3), q(11, 7)),
            Point::new(qi(0), q(17, 10)),
        ])
        .unwrap(),
        ToricProfile::new(vec![
            Point::new(q(5, 3), qi(0)),
            Point::new(q(3, 5), q(2, 7)),
            Point::new(q(2, 9), q(9, 7)),
            Point::new(qi(0), q(19, 11)),
        ])
        .unwrap(),
        ToricProfile::new(vec![
            Point::new(q(11, 7), qi(0)),
            Point::new(q(13, 7), q(17, 13)),
            Point::new(q(4, 5), q(7, 6)),
            Point::new(q(10, 11), q(9, 5)),
            Point::new(qi(0), q(23, 12)),
        ])
        .unwrap(),
    ]
}

/// `n` distinct positive rationals with small numerators and denominators.
pub fn random_scalars<R: Rng>(rng: &mut R, n: usize) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    while out.len() < n {
        let c = q(rng.gen_range(1..=40), rng.gen_range(1..=9));
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out.shuffle(rng);
    out
}
