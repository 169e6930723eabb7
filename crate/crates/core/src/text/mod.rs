//! Text grammar for symbols: parsing, rendering and a structured JSON form.
//!
//! ```text
//! series := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' exponent]
//! atom   := rational | 'i' | 'hbar' | 'eps' | variable | field | '(' series ')'
//! ```
//!
//! Variables are `x y v_x v_y` (particle chart) or `X Y V_x V_y` (guiding
//! center chart). Fields are `B`, `phi`, `E_x`, `E_y`, `c1`, `c2`, `mu_z` and
//! derivatives such as `d[x,y]B`. Only `B` and `eps` take negative
//! exponents, and only `B` takes half-integer ones, written `B^(-3/2)`.

mod parse;
mod render;
mod structured;

pub use parse::{parse_series, parse_series_in};
pub use render::{render, RenderStyle};
pub use structured::{to_json, to_structured, CoeffJson, GenJson, TermJson};
