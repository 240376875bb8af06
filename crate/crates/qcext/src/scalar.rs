use num_traits::{Float, FloatConst, FromPrimitive, NumCast};
use std::fmt::Debug;

/// Floating point scalar the planar kernel is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumCast + Debug + Default + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}
