//! Toolkit for shifts of finite type over generalized Baumslag-Solitar groups.
//!
//! The library is organized bottom-up:
//!
//! * [`group`]: elements and canonical normal forms for `F_n`, `F_n x Z` and
//!   `BS(m,n)`, together with ball enumeration in the word metric.
//! * [`oracle`]: a bounded word-problem oracle (relator-insertion search plus
//!   an affine shadow) used to cross-check the normal forms.
//! * [`patch`]: finite labelled patches over group balls and a generic period
//!   scanner for the translation action.
//! * [`flow`]: the tree-flow subshift. Configurations assign to every element
//!   an outgoing direction; valid configurations correspond to rays, encoded
//!   as flow words.
//! * [`height`]: flow-relative height `beta_y`, the horizontal coordinate
//!   `alpha` and the level function `lambda` with exact rational arithmetic.
//! * [`wang`]: piecewise-linear circle maps, the seven-field Wang tiles over
//!   `BS(2,3)`, construction and validation of tiled configurations.
//! * [`fold`]: square Wang tiles over `Z^2`, folding tilings onto `F_n x Z`
//!   along a flow, unfolding back, rotation and higher-block recodings.
//! * [`locked`]: finite quotients, locked-shift local rules and lifts.
//! * [`gbs`]: graphs of `Z`s, fundamental-group presentations, Baumslag-Solitar
//!   subgroup witnesses and quasi-isometry classification.
//! * [`verify`]: the end-to-end verification suite with pinned tolerances.

pub mod flow;
pub mod fold;
pub mod gbs;
pub mod group;
pub mod height;
pub mod locked;
pub mod oracle;
pub mod patch;
pub mod rat;
pub mod verify;
pub mod wang;
