//! Small named matroids used by tests, the CLI and the verification suites.

use alloc::vec;
use alloc::vec::Vec;

use crate::curve::{rat, RankDensityCurve};
use crate::matroid::{Graphic, MatroidKind, Partition, Uniform};

/// Vertices of the example graph of the principal-decomposition figure.
pub const FIG1_VERTICES: usize = 31;

/// Edge list of the example graph as drawn. Vertex blocks: `a0..a7 = 0..7`,
/// `b1,b2 = 8,9`, `c1..c4 = 10..13`, `d1,d2 = 14,15`, `e1..e7 = 16..22`,
/// `f0..f4 = 23..27`, `g1..g3 = 28..30`.
///
/// As drawn, `b1` has three edges into the `a` clique, which after
/// contracting the clique form a parallel class of density 3, and the
/// triangle on `e5..e7` adds two units of rank. The curve of this graph is
/// therefore not the printed one; see [`fig1_edges`].
pub fn fig1_drawn_edges() -> Vec<(usize, usize)> {
    let mut edges = fig1_edges();
    let i = edges.iter().position(|&e| e == (9, 3)).expect("moved edge present");
    edges[i] = (8, 3);
    edges.extend_from_slice(&[(20, 21), (21, 22), (22, 20)]);
    edges
}

/// The example graph adjusted so that its rank-density curve is the printed
/// one: edge `b1–a3` is attached to `b2` instead and the `e5..e7` triangle
/// is left out. 61 edges, rank 27.
pub fn fig1_edges() -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(61);
    for u in 0..8 {
        for v in u + 1..8 {
            edges.push((u, v));
        }
    }
    edges.extend_from_slice(&[
        (8, 1),
        (8, 2),
        (9, 3),
        (8, 9),
        (9, 0),
        (10, 4),
        (10, 5),
        (10, 11),
        (10, 12),
        (11, 13),
        (11, 12),
        (12, 13),
        (11, 6),
        (13, 9),
        (14, 9),
        (14, 7),
        (14, 15),
        (15, 12),
        (16, 2),
        (19, 9),
        (16, 17),
        (17, 18),
        (18, 19),
        (19, 16),
        (23, 24),
        (24, 25),
        (25, 26),
        (26, 27),
        (23, 10),
        (27, 18),
        (28, 29),
        (14, 30),
        (30, 20),
    ]);
    edges
}

pub fn fig1() -> Graphic {
    Graphic::new(FIG1_VERTICES, fig1_edges()).expect("fixture edges are valid")
}

pub fn fig1_drawn() -> Graphic {
    Graphic::new(FIG1_VERTICES, fig1_drawn_edges()).expect("fixture edges are valid")
}

/// The rank-density curve printed for the example graph.
pub fn fig1_curve() -> RankDensityCurve {
    RankDensityCurve::from_pairs(&[
        (rat(7, 1), rat(4, 1)),
        (rat(9, 1), rat(5, 2)),
        (rat(13, 1), rat(9, 4)),
        (rat(15, 1), rat(2, 1)),
        (rat(19, 1), rat(3, 2)),
        (rat(24, 1), rat(6, 5)),
        (rat(27, 1), rat(1, 1)),
    ])
    .expect("fixture curve is valid")
}

/// Triangle on vertices 0,1,2 (edges 0..3) plus pendant edge 2–3 (edge 3).
pub fn triangle_pendant() -> Graphic {
    Graphic::new(4, vec![(0, 1), (1, 2), (0, 2), (2, 3)]).expect("fixture edges are valid")
}

pub fn triangle() -> Graphic {
    Graphic::new(3, vec![(0, 1), (1, 2), (0, 2)]).expect("fixture edges are valid")
}

/// `copies` parallel copies of a basis of size `rank`: a partition matroid
/// with `rank` classes of `copies` elements and capacity one. Element
/// `i * copies + c` is copy `c` of basis element `i`, so it contains exactly
/// `copies` disjoint bases.
pub fn parallel_basis(rank: usize, copies: usize) -> MatroidKind {
    Partition::new(&vec![copies; rank], &vec![1; rank])
        .expect("positive capacities")
        .into()
}

/// Fixture for the OSP guarantee: `h` disjoint independent sets of size `s`
/// (the copies of a size-`s` basis).
pub fn osp_fixture(h: usize, s: usize) -> MatroidKind {
    parallel_basis(s, h)
}

pub fn uniform(n: usize, k: usize) -> MatroidKind {
    Uniform::new(n, k).expect("k <= n").into()
}
