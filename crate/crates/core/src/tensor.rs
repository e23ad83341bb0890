//! Dense rank-3 tensors (channels x height x width), the universal value type.
//!
//! Data is stored row-major within each channel, channels contiguous. All
//! network parameters and activations use this type; convolution kernels pack
//! their four axes `[out_ch, in_ch, kh, kw]` as `(out_ch, in_ch, kh*kw)` with
//! the kernel window size carried alongside by the op (see [`crate::ops`]).
//!
//! Production paths run at `f32`; the gradient-check harness runs the same
//! code at `f64`.

use std::fmt;
use std::io::{Read, Write};

use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};

/// Magic bytes of the tensor blob format.
pub const TENSOR_MAGIC: &[u8; 4] = b"TNS1";

/// Element type of tensors: `f32` in production, `f64` for gradient checks.
pub trait Scalar:
    Float + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for f32 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
}

impl Shape {
    pub const fn new(channels: usize, height: usize, width: usize) -> Self {
        Shape { channels, height, width }
    }

    pub const fn numel(&self) -> usize {
        self.channels * self.height * self.width
    }

    /// Elements per channel.
    pub const fn plane(&self) -> usize {
        self.height * self.width
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.channels, self.height, self.width)
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq)]
pub struct Tensor<T = f32> {
    shape: Shape,
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(shape: Shape) -> Self {
        Tensor { shape, data: vec![T::zero(); shape.numel()] }
    }

    pub fn full(shape: Shape, value: T) -> Self {
        Tensor { shape, data: vec![value; shape.numel()] }
    }

    /// A 1x1x1 tensor holding one value.
    pub fn scalar(value: T) -> Self {
        Tensor { shape: Shape::new(1, 1, 1), data: vec![value] }
    }

    pub fn from_vec(shape: Shape, data: Vec<T>) -> Result<Self> {
        if data.len() != shape.numel() {
            return Err(Error::shape(
                "Tensor::from_vec",
                format!("{} values for shape {shape}", shape.numel()),
                format!("{} values", data.len()),
            ));
        }
        Ok(Tensor { shape, data })
    }

    pub fn from_fn(shape: Shape, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(shape.numel());
        for c in 0..shape.channels {
            for y in 0..shape.height {
                for x in 0..shape.width {
                    data.push(f(c, y, x));
                }
            }
        }
        Tensor { shape, data }
    }

    /// I.i.d. uniform samples on `[lo, hi)`.
    pub fn uniform(shape: Shape, lo: f64, hi: f64, rng: &mut impl Rng) -> Self {
        let data = (0..shape.numel())
            .map(|_| T::from_f64(rng.random_range(lo..hi)))
            .collect();
        Tensor { shape, data }
    }

    /// Uniform init scaled by fan-in: `U(-1/sqrt(fan_in), 1/sqrt(fan_in))`.
    pub fn scaled_uniform(shape: Shape, fan_in: usize, rng: &mut impl Rng) -> Self {
        let bound = 1.0 / (fan_in.max(1) as f64).sqrt();
        Self::uniform(shape, -bound, bound, rng)
    }

    #[inline]
    pub fn shape(&self) -> Shape {
        self.shape
    }

    #[inline]
    pub fn numel(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// Row-major slice of one channel.
    #[inline]
    pub fn channel(&self, c: usize) -> &[T] {
        let plane = self.shape.plane();
        &self.data[c * plane..(c + 1) * plane]
    }

    #[inline]
    pub fn channel_mut(&mut self, c: usize) -> &mut [T] {
        let plane = self.shape.plane();
        &mut self.data[c * plane..(c + 1) * plane]
    }

    #[inline]
    pub fn at(&self, c: usize, y: usize, x: usize) -> T {
        self.data[(c * self.shape.height + y) * self.shape.width + x]
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, v: T) {
        self.data[(c * self.shape.height + y) * self.shape.width + x] = v;
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Tensor<T> {
        Tensor {
            shape: self.shape,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn is_all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Sum of all elements, in storage order.
    pub fn sum(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    /// Squared L2 norm accumulated in f64 (used for gradient clipping).
    pub fn sq_norm_f64(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64() * v.to_f64()).sum()
    }

    pub fn add_in_place(&mut self, other: &Tensor<T>) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::shape(
                "add_in_place",
                self.shape.to_string(),
                other.shape.to_string(),
            ));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + *b;
        }
        Ok(())
    }

    pub fn scale_in_place(&mut self, c: T) {
        for v in &mut self.data {
            *v = *v * c;
        }
    }

    /// The leading `count` channels as a new tensor.
    pub fn slice_channels(&self, start: usize, count: usize) -> Tensor<T> {
        let plane = self.shape.plane();
        Tensor {
            shape: Shape::new(count, self.shape.height, self.shape.width),
            data: self.data[start * plane..(start + count) * plane].to_vec(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> Tensor<U> {
        Tensor {
            shape: self.shape,
            data: self.data.iter().map(|v| U::from_f64(v.to_f64())).collect(),
        }
    }
}

impl<T: Scalar> fmt::Debug for Tensor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor<{}>({})", std::any::type_name::<T>(), self.shape)
    }
}

impl Tensor<f32> {
    /// Serialize as a tensor blob: 16-byte header (magic `TNS1` + three
    /// little-endian u32 dims), then f32 little-endian values, row-major
    /// within channel.
    pub fn write_blob(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(TENSOR_MAGIC)?;
        for dim in [self.shape.channels, self.shape.height, self.shape.width] {
            let dim = u32::try_from(dim)
                .map_err(|_| Error::InvalidArgument(format!("dimension {dim} exceeds u32")))?;
            w.write_all(&dim.to_le_bytes())?;
        }
        for v in &self.data {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_blob(r: &mut impl Read) -> Result<Tensor<f32>> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != TENSOR_MAGIC {
            return Err(Error::format(
                "<tensor blob>",
                format!("bad magic {magic:?}, expected {TENSOR_MAGIC:?}"),
            ));
        }
        let mut dims = [0usize; 3];
        for d in &mut dims {
            let mut buf = [0u8; 4];
            r.read_exact(&mut buf)?;
            *d = u32::from_le_bytes(buf) as usize;
        }
        let shape = Shape::new(dims[0], dims[1], dims[2]);
        let mut data = Vec::with_capacity(shape.numel());
        let mut buf = [0u8; 4];
        for _ in 0..shape.numel() {
            r.read_exact(&mut buf)?;
            data.push(f32::from_le_bytes(buf));
        }
        Ok(Tensor { shape, data })
    }

    /// Byte length of the serialized blob.
    pub fn blob_len(&self) -> usize {
        16 + 4 * self.numel()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_rejects_wrong_length() {
        let err = Tensor::<f32>::from_vec(Shape::new(2, 2, 2), vec![0.0; 7]).unwrap_err();
        assert!(err.to_string().contains("8 values"), "{err}");
    }

    #[test]
    fn channel_slices_are_disjoint_planes() {
        let t = Tensor::<f32>::from_fn(Shape::new(3, 2, 2), |c, y, x| (c * 100 + y * 10 + x) as f32);
        assert_eq!(t.channel(1), &[100.0, 101.0, 110.0, 111.0]);
        assert_eq!(t.at(2, 1, 0), 210.0);
    }

    #[test]
    fn slice_channels_recovers_leading_block() {
        let t = Tensor::<f32>::from_fn(Shape::new(5, 3, 3), |c, y, x| (c + y + x) as f32);
        let lead = t.slice_channels(0, 2);
        assert_eq!(lead.shape(), Shape::new(2, 3, 3));
        assert_eq!(lead.data(), &t.data()[..2 * 9]);
    }

    #[test]
    fn blob_round_trip_is_bit_exact() {
        let t = Tensor::<f32>::from_fn(Shape::new(2, 3, 4), |c, y, x| {
            (c as f32 + 0.25) * (y as f32 - 1.5) + x as f32 * 0.125
        });
        let mut buf = Vec::new();
        t.write_blob(&mut buf).unwrap();
        assert_eq!(buf.len(), t.blob_len());
        let back = Tensor::<f32>::read_blob(&mut buf.as_slice()).unwrap();
        assert_eq!(back.shape(), t.shape());
        assert_eq!(back.data(), t.data());
    }

    #[test]
    fn blob_rejects_bad_magic() {
        let t = Tensor::<f32>::zeros(Shape::new(1, 1, 1));
        let mut buf = Vec::new();
        t.write_blob(&mut buf).unwrap();
        buf[0] = b'X';
        let err = Tensor::<f32>::read_blob(&mut buf.as_slice()).unwrap_err();
        assert!(err.to_string().contains("TNS1"), "{err}");
    }

    #[test]
    fn blob_rejects_truncation() {
        let t = Tensor::<f32>::zeros(Shape::new(2, 4, 4));
        let mut buf = Vec::new();
        t.write_blob(&mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(Tensor::<f32>::read_blob(&mut buf.as_slice()).is_err());
    }
}
