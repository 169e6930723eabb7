use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::monomial::Generator;
use crate::series::GradedSeries;

#[derive(Debug, Clone, Serialize)]
pub struct CoeffJson {
    pub re_num: Value,
    pub re_den: Value,
    pub im_num: Value,
    pub im_den: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenJson {
    pub field: &'static str,
    pub d: Vec<&'static str>,
    pub pow: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub hbar: u32,
    pub eps: i32,
    pub bhalf: i32,
    pub gens: Vec<GenJson>,
    pub v: [u32; 2],
    #[serde(skip_serializing_if = "is_origin")]
    pub pos: [u32; 2],
}

fn is_origin(p: &[u32; 2]) -> bool {
    *p == [0, 0]
}

/// Exact integers; values beyond 64 bits are emitted as decimal strings.
fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn gen_json(g: Generator, pow: u32) -> GenJson {
    let (field, idx) = match g {
        Generator::DB(a) => ("B", Some(a)),
        Generator::Dphi(a) => ("phi", Some(a)),
        Generator::C1 => ("c1", None),
        Generator::C2 => ("c2", None),
        Generator::MuZ => ("mu_z", None),
    };
    GenJson {
        field,
        d: idx
            .map(|a| a.axes().into_iter().map(|x| x.name()).collect())
            .unwrap_or_default(),
        pow,
    }
}

/// Machine-readable term list containing integers only.
pub fn to_structured(s: &GradedSeries) -> Vec<TermJson> {
    s.terms()
        .map(|(m, c)| TermJson {
            coeff: CoeffJson {
                re_num: int(c.re.numer()),
                re_den: int(c.re.denom()),
                im_num: int(c.im.numer()),
                im_den: int(c.im.denom()),
            },
            hbar: m.hbar,
            eps: m.eps,
            bhalf: m.field.b_half,
            gens: m.field.gens.iter().map(|&(g, p)| gen_json(g, p)).collect(),
            v: m.vel,
            pos: m.pos,
        })
        .collect()
}

pub fn to_json(s: &GradedSeries) -> String {
    serde_json::to_string(&to_structured(s)).expect("plain data serialises")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Truncation;
    use crate::text::parse_series;

    #[test]
    fn product_structure() {
        let s = parse_series("v_x*v_y + (1/2)*i*hbar*eps^-1*B", Truncation::default()).unwrap();
        let j = to_json(&s);
        assert_eq!(
            j,
            concat!(
                r#"[{"coeff":{"re_num":1,"re_den":1,"im_num":0,"im_den":1},"hbar":0,"eps":0,"bhalf":0,"gens":[],"v":[1,1]},"#,
                r#"{"coeff":{"re_num":0,"re_den":1,"im_num":1,"im_den":2},"hbar":1,"eps":-1,"bhalf":2,"gens":[],"v":[0,0]}]"#
            )
        );
        assert!(!j.contains('.'));
    }

    #[test]
    fn generator_fields() {
        let s = parse_series("d[x,y]B^2*phi*x", Truncation::default()).unwrap();
        let j = to_json(&s);
        assert!(j.contains(r#"{"field":"B","d":["x","y"],"pow":2}"#));
        assert!(j.contains(r#"{"field":"phi","d":[],"pow":1}"#));
        assert!(j.contains(r#""pos":[1,0]"#));
    }
}
