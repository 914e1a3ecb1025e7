//! Small designs used throughout the tests and constructions.

use super::CoveringDesign;

/// The Fano plane as a `(7, 3, 2)` covering (a Steiner triple system).
pub fn fano_plane() -> CoveringDesign {
    CoveringDesign::from_lists(
        7,
        3,
        2,
        &[
            vec![1, 2, 3],
            vec![1, 4, 5],
            vec![1, 6, 7],
            vec![2, 4, 6],
            vec![2, 5, 7],
            vec![3, 4, 7],
            vec![3, 5, 6],
        ],
    )
    .expect("valid block list")
}

/// A five-block `(9, 5, 2)` covering design.
pub fn design_9_5_2() -> CoveringDesign {
    CoveringDesign::from_lists(
        9,
        5,
        2,
        &[
            vec![1, 2, 3, 4, 5],
            vec![1, 2, 3, 4, 6],
            vec![1, 2, 7, 8, 9],
            vec![3, 4, 7, 8, 9],
            vec![5, 6, 7, 8, 9],
        ],
    )
    .expect("valid block list")
}

/// All six pairs of a 4-set, a `(4, 2, 2)` covering.
pub fn all_pairs_4() -> CoveringDesign {
    CoveringDesign::complete(4, 2, 2).expect("valid parameters")
}
