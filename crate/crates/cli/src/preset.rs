//! Curves given on the command line as real polynomials in `t`.
//!
//! `"c0,c1,c2"` is `c0 + c1 t + c2 t^2`; several components are separated by
//! `;`.

use orbit_lift::C;

use crate::config::parse_reals;
use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyCurve {
    components: Vec<Vec<f64>>,
}

impl PolyCurve {
    pub fn parse(key: &str, raw: &str) -> Result<Self, CliError> {
        let components = raw
            .split(';')
            .map(|p| parse_reals(key, p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, t: f64) -> Vec<C<f64>> {
        self.components
            .iter()
            .map(|c| C::new(c.iter().rev().fold(0.0, |acc, x| acc * t + x), 0.0))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_evaluation() {
        let p = PolyCurve::parse("g", "1,0,2;0,1").unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.eval(3.0), vec![C::new(19.0, 0.0), C::new(3.0, 0.0)]);
        assert!(PolyCurve::parse("g", "1,x").is_err());
    }
}
