use serde::{Deserialize, Serialize};

use super::{
    const_curvature, lcf_curvature_from_ricci, ricci_of, AlgCurvature, PointFrame, SymTensor2,
};
use crate::error::{Error, Result};

/// JSON description of pointwise tensor data.
///
/// `g` defaults to the identity; exactly one of `kappa`, `ricci` or
/// `riemann` must be present. Matrices are row-major, `riemann` uses the
/// `i,k,j,l` index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDocument {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
    pub h: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ricci: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub riemann: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct ResolvedTensors {
    pub frame: PointFrame,
    pub rm: AlgCurvature,
    pub rc: SymTensor2,
    pub h: SymTensor2,
}

impl TensorDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn resolve(&self) -> Result<ResolvedTensors> {
        let n = self.n;
        let frame = match &self.g {
            Some(g) => PointFrame::from_row_major(n, g)?,
            None => PointFrame::identity(n)?,
        };
        let h = SymTensor2::from_row_major(n, &self.h)?;
        let rm = match (&self.kappa, &self.ricci, &self.riemann) {
            (Some(kappa), None, None) => const_curvature(&frame, *kappa),
            (None, Some(ricci), None) => {
                lcf_curvature_from_ricci(&frame, &SymTensor2::from_row_major(n, ricci)?)?
            }
            (None, None, Some(riemann)) => AlgCurvature::from_components(n, riemann.clone())?,
            _ => {
                return Err(Error::Invalid(
                    "tensor document needs exactly one of `kappa`, `ricci`, `riemann`".into(),
                ))
            }
        };
        let rc = ricci_of(&frame, &rm)?;
        Ok(ResolvedTensors { frame, rm, rc, h })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ID4: &str = "[1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]";

    #[test]
    fn kappa_document() {
        let doc = TensorDocument::from_json(&format!(r#"{{"n":4,"kappa":1,"h":{ID4}}}"#)).unwrap();
        let r = doc.resolve().unwrap();
        assert_eq!(r.rc, &SymTensor2::identity(4) * 3.0);
    }

    #[test]
    fn ricci_document() {
        let doc = TensorDocument::from_json(&format!(
            r#"{{"n":4,"ricci":[3,0,0,0, 0,3,0,0, 0,0,3,0, 0,0,0,3],"h":{ID4}}}"#
        ))
        .unwrap();
        let r = doc.resolve().unwrap();
        assert!((r.rc.matrix() - SymTensor2::identity(4).matrix() * 3.0).amax() < 1e-14);
    }

    #[test]
    fn rejects_ambiguous_or_missing_curvature() {
        let both = format!(r#"{{"n":4,"kappa":1,"riemann":[],"h":{ID4}}}"#);
        assert!(TensorDocument::from_json(&both).unwrap().resolve().is_err());
        let neither = format!(r#"{{"n":4,"h":{ID4}}}"#);
        assert!(TensorDocument::from_json(&neither)
            .unwrap()
            .resolve()
            .is_err());
        let unknown = format!(r#"{{"n":4,"kappa":1,"h":{ID4},"extra":0}}"#);
        assert!(TensorDocument::from_json(&unknown).is_err());
        let short = r#"{"n":4,"kappa":1,"h":[1,0,0]}"#;
        assert!(TensorDocument::from_json(short).unwrap().resolve().is_err());
    }
}
