//! Polychromatic colorings of even tori: unit-cube labelings, toast
//! decompositions, and the rigidity of `2^d`-colorings.

pub mod check;
pub mod coloring;
pub mod cube_path;
pub mod error;
pub mod grid;
pub mod labeling;
pub mod render;
pub mod rigidity;
pub mod toast;

pub use error::{Error, Result};

// The guide's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/grid.md")]
    mod grid {}
    #[doc = include_str!("../../../book/src/cube-path.md")]
    mod cube_path {}
    #[doc = include_str!("../../../book/src/toast.md")]
    mod toast {}
    #[doc = include_str!("../../../book/src/coloring.md")]
    mod coloring {}
    #[doc = include_str!("../../../book/src/rigidity.md")]
    mod rigidity {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
