//! Classical guiding-center transformation through second order in `eps`.
//!
//! `E_x, E_y` stand for `-d[x]phi, -d[y]phi`; second derivatives of the
//! electric field are written out as derivatives of `phi`.

use crate::error::Result;
use crate::series::{Chart, GradedSeries, Truncation};
use crate::text::parse_series_in;

const FORWARD: [&str; 4] = [
    // X
    "x + eps*B^-1*v_y + (1/2)*eps^2*B^-3*(d[y]B*v_x - d[x]B*v_y)*v_y",
    // Y
    "y - eps*B^-1*v_x - (1/2)*eps^2*B^-3*(d[y]B*v_x - d[x]B*v_y)*v_x",
    // V_x
    "B^(-1/2)*v_x
     + (1/2)*eps*B^(-5/2)*(d[y]B*v_x^2 + d[x]B*v_x*v_y + 2*d[y]B*v_y^2 - 2*B*E_y)
     + (1/16)*eps^2*B^(-9/2)*(
         (-5*d[x]B^2 - B*d[x,x]B + 13*d[y]B^2 - 5*B*d[y,y]B)*v_x^3
       - 2*(4*d[x]B*d[y]B + 2*B*d[x,y]B - c1)*v_x^2*v_y
       + (-15*d[x]B^2 + 7*B*d[x,x]B + 23*d[y]B^2 - 13*B*d[y,y]B)*v_x*v_y^2
       + 2*(-14*d[x]B*d[y]B + 6*B*d[x,y]B + c1)*v_y^3
       + 4*B*(d[x]B*E_x - B*d[x,x]phi - 7*d[y]B*E_y - 3*B*d[y,y]phi)*v_x
       + 2*B*(c2 + 3*d[x]B*E_y + 15*d[y]B*E_x + 8*B*d[x,y]phi)*v_y)",
    // V_y
    "B^(-1/2)*v_y
     - (1/2)*eps*B^(-5/2)*(2*d[x]B*v_x^2 + d[y]B*v_x*v_y + d[x]B*v_y^2 - 2*B*E_x)
     + (1/16)*eps^2*B^(-9/2)*(
         2*(-14*d[x]B*d[y]B + 6*B*d[x,y]B - c1)*v_x^3
       + (23*d[x]B^2 - 13*B*d[x,x]B - 15*d[y]B^2 + 7*B*d[y,y]B)*v_x^2*v_y
       - 2*(4*d[x]B*d[y]B + 2*B*d[x,y]B + c1)*v_x*v_y^2
       + (13*d[x]B^2 - 5*B*d[x,x]B - 5*d[y]B^2 - B*d[y,y]B)*v_y^3
       - 2*B*(c2 - 13*d[x]B*E_y - d[y]B*E_x)*v_x
       + 4*B*(-7*d[x]B*E_x - 3*B*d[x,x]phi + d[y]B*E_y - B*d[y,y]phi)*v_y)",
];

const BACKWARD: [&str; 4] = [
    // x
    "X - eps*B^(-1/2)*V_y - (1/2)*eps^2*B^-2*(2*d[x]B*V_x^2 + d[y]B*V_x*V_y + d[x]B*V_y^2 - 2*E_x)",
    // y
    "Y + eps*B^(-1/2)*V_x - (1/2)*eps^2*B^-2*(d[y]B*V_x^2 + d[x]B*V_x*V_y + 2*d[y]B*V_y^2 - 2*E_y)",
    // v_x
    "B^(1/2)*V_x
     - eps*B^-1*((d[x]B*V_x + d[y]B*V_y)*V_y - E_y)
     + (1/16)*eps^2*B^(-5/2)*(
         (-11*d[x]B^2 + B*d[x,x]B - 3*d[y]B^2 + B*d[y,y]B)*V_x^3
       - 4*(5*d[x]B*d[y]B + B*d[x,y]B + (1/2)*c1)*V_x^2*V_y
       + (d[x]B^2 + 5*B*d[x,x]B - 15*d[y]B^2 - 3*B*d[y,y]B)*V_x*V_y^2
       + 4*(d[x]B*d[y]B + B*d[x,y]B - (1/2)*c1)*V_y^3
       + 4*(3*d[x]B*E_x + B*d[x,x]phi + d[y]B*E_y - B*d[y,y]phi)*V_x
       - 2*(c2 - d[x]B*E_y - d[y]B*E_x)*V_y)",
    // v_y
    "B^(1/2)*V_y
     + eps*B^-1*((d[x]B*V_x + d[y]B*V_y)*V_x - E_x)
     + (1/16)*eps^2*B^(-5/2)*(
         4*(d[x]B*d[y]B + B*d[x,y]B + (1/2)*c1)*V_x^3
       + (-15*d[x]B^2 - 3*B*d[x,x]B + d[y]B^2 + 5*B*d[y,y]B)*V_x^2*V_y
       - 4*(5*d[x]B*d[y]B + B*d[x,y]B - (1/2)*c1)*V_x*V_y^2
       + (-3*d[x]B^2 + B*d[x,x]B - 11*d[y]B^2 + B*d[y,y]B)*V_y^3
       + 2*(c2 + 3*d[x]B*E_y + 3*d[y]B*E_x + 8*B*d[x,y]phi)*V_x
       + 4*(d[x]B*E_x - B*d[x,x]phi + 3*d[y]B*E_y + B*d[y,y]phi)*V_y)",
];

fn load(src: &[&str; 4], chart: Chart, trunc: Truncation) -> Result<[GradedSeries; 4]> {
    let p = |s: &str| parse_series_in(s, trunc, chart);
    Ok([p(src[0])?, p(src[1])?, p(src[2])?, p(src[3])?])
}

/// `(X, Y, V_x, V_y)` as functions of the particle variables.
pub fn forward_map(trunc: Truncation) -> Result<[GradedSeries; 4]> {
    load(&FORWARD, Chart::Particle, trunc)
}

/// `(x, y, v_x, v_y)` as functions of the guiding-center variables.
pub fn backward_map(trunc: Truncation) -> Result<[GradedSeries; 4]> {
    load(&BACKWARD, Chart::GuidingCenter, trunc)
}
