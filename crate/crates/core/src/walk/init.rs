use std::str::FromStr;

use crate::graphs::LabeledGraph;
use crate::linalg::{StateVector, C64};

use super::WalkError;

/// Coin part of an initial product state.
#[derive(Clone, Debug, PartialEq)]
pub enum CoinInit {
    /// Equal real amplitudes on every label.
    Uniform,
    Basis(usize),
    /// Explicit amplitudes, normalized on use.
    Amplitudes(Vec<C64>),
}

impl CoinInit {
    pub fn amplitudes(&self, coin_dim: usize) -> Result<Vec<C64>, WalkError> {
        match self {
            Self::Uniform => Ok(vec![C64::new(1.0 / (coin_dim as f64).sqrt(), 0.0); coin_dim]),
            Self::Basis(k) if *k < coin_dim => {
                let mut v = vec![C64::new(0.0, 0.0); coin_dim];
                v[*k] = C64::new(1.0, 0.0);
                Ok(v)
            }
            Self::Basis(k) => Err(WalkError::InitialState(format!("coin {k} outside dimension {coin_dim}"))),
            Self::Amplitudes(a) => {
                if a.len() != coin_dim {
                    return Err(WalkError::InitialState(format!(
                        "{} coin amplitudes for coin dimension {coin_dim}",
                        a.len()
                    )));
                }
                let norm = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                if norm == 0.0 || !norm.is_finite() {
                    return Err(WalkError::InitialState("coin amplitudes have zero norm".into()));
                }
                Ok(a.iter().map(|x| x / norm).collect())
            }
        }
    }
}

/// `|coin> (x) |position>` with the position given as a graph coordinate.
///
/// Text form: `<coin>@pos:<k>` with `<coin>` one of `uniform`, `basis:<k>`,
/// `amp:[re,im;re,im;...]`, optionally prefixed by `coin:`. `@pos:` may be
/// omitted, meaning coordinate 0.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialState {
    pub coin: CoinInit,
    pub position: i64,
}

impl InitialState {
    pub fn new(coin: CoinInit, position: i64) -> Self {
        Self { coin, position }
    }

    pub fn build(&self, graph: &LabeledGraph) -> Result<StateVector, WalkError> {
        let coin = self.coin.amplitudes(graph.labels().len())?;
        let v = graph
            .vertex_at(self.position)
            .ok_or_else(|| WalkError::InitialState(format!("no vertex at coordinate {}", self.position)))?;
        Ok(StateVector::coin_at(&coin, graph.n(), v))
    }
}

fn bad(s: &str) -> WalkError {
    WalkError::InitialState(format!("cannot parse {s:?}"))
}

impl FromStr for CoinInit {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s.strip_prefix("coin:").unwrap_or(s);
        if s == "uniform" {
            return Ok(Self::Uniform);
        }
        if let Some(k) = s.strip_prefix("basis:") {
            return k.trim().parse().map(Self::Basis).map_err(|_| bad(s));
        }
        let body = s
            .strip_prefix("amp:")
            .and_then(|b| b.trim().strip_prefix('['))
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| bad(s))?;
        body.split(';')
            .map(|pair| {
                let parts: Vec<f64> =
                    pair.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad(s))?;
                match parts[..] {
                    [re] => Ok(C64::new(re, 0.0)),
                    [re, im] => Ok(C64::new(re, im)),
                    _ => Err(bad(s)),
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::Amplitudes)
    }
}

impl FromStr for InitialState {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (coin, pos) = match s.split_once('@') {
            Some((c, p)) => {
                let p = p.trim();
                let p = p.strip_prefix("pos:").unwrap_or(p);
                (c, p.parse::<i64>().map_err(|_| bad(s))?)
            }
            None => (s, 0),
        };
        Ok(Self::new(coin.parse()?, pos))
    }
}
