//! IDX image ingestion and the crop / shuffle / noise transforms that turn
//! image samples into point clouds.
//!
//! IDX layout (big-endian): magic `0x00000803` (unsigned byte, 3 dims),
//! then image count, rows and columns as `u32`, then `count·rows·cols`
//! pixel bytes, row-major per image.
//!
//! Only single-channel data is handled; colour datasets must be converted to
//! grayscale before being written as IDX.

use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, IdxError, Result};
use crate::pointcloud::PointCloud;
use crate::rng::{seeded, ChaCha8Rng};

pub const IDX_MAGIC_U8_3D: u32 = 0x0000_0803;
const IDX_HEADER_LEN: usize = 16;

/// A stack of equally sized 8-bit grayscale images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageSet {
    count: usize,
    height: usize,
    width: usize,
    pixels: Vec<u8>,
}

impl ImageSet {
    pub fn new(count: usize, height: usize, width: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != count * height * width {
            return Err(Error::InvalidArgument(format!(
                "{} pixel bytes for {count} images of {height}x{width}",
                pixels.len()
            )));
        }
        Ok(Self { count, height, width, pixels })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn image(&self, i: usize) -> &[u8] {
        let sz = self.height * self.width;
        &self.pixels[i * sz..(i + 1) * sz]
    }

    pub fn from_idx_bytes(bytes: &[u8]) -> Result<Self, IdxError> {
        if bytes.len() < 4 {
            return Err(IdxError::TruncatedHeader(bytes.len()));
        }
        let word = |k: usize| u32::from_be_bytes(bytes[k..k + 4].try_into().unwrap());
        let magic = word(0);
        if magic != IDX_MAGIC_U8_3D {
            if bytes[0] == 0 && bytes[1] == 0 && bytes[2] == 0x08 {
                return Err(IdxError::DimensionCount(bytes[3]));
            }
            return Err(IdxError::BadMagic(magic));
        }
        if bytes.len() < IDX_HEADER_LEN {
            return Err(IdxError::TruncatedHeader(bytes.len()));
        }
        let (count, height, width) = (word(4) as usize, word(8) as usize, word(12) as usize);
        let expected = count * height * width;
        let actual = bytes.len() - IDX_HEADER_LEN;
        if actual < expected {
            return Err(IdxError::TruncatedPayload { expected, actual });
        }
        if actual > expected {
            return Err(IdxError::TrailingBytes { expected, actual });
        }
        Ok(Self {
            count,
            height,
            width,
            pixels: bytes[IDX_HEADER_LEN..].to_vec(),
        })
    }

    pub fn to_idx_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(IDX_HEADER_LEN + self.pixels.len());
        for word in [
            IDX_MAGIC_U8_3D,
            self.count as u32,
            self.height as u32,
            self.width as u32,
        ] {
            out.extend_from_slice(&word.to_be_bytes());
        }
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write_idx(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_idx_bytes()).map_err(|e| Error::io(path, e))
    }
}

pub fn read_idx(path: impl AsRef<Path>) -> Result<ImageSet> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(ImageSet::from_idx_bytes(&bytes)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CropRegion {
    Center,
    CornerTopLeft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CropSpec {
    pub region: CropRegion,
    pub size: usize,
}

impl CropSpec {
    pub fn new(region: CropRegion, size: usize) -> Self {
        Self { region, size }
    }

    /// Top-left `(row, col)` of the crop window in an image of the given shape.
    pub fn origin(&self, height: usize, width: usize) -> Result<(usize, usize)> {
        if self.size == 0 || self.size > height || self.size > width {
            return Err(Error::InvalidArgument(format!(
                "crop of size {} does not fit {height}x{width} images",
                self.size
            )));
        }
        Ok(match self.region {
            CropRegion::Center => ((height - self.size) / 2, (width - self.size) / 2),
            CropRegion::CornerTopLeft => (0, 0),
        })
    }
}

impl Default for CropSpec {
    fn default() -> Self {
        Self::new(CropRegion::Center, 10)
    }
}

/// Samples `sample_n` distinct images, adds Gaussian noise to the
/// `[0,1]`-scaled intensities, crops and flattens each into one point of
/// `R^(size²)`.
pub fn crop_to_cloud(
    images: &ImageSet,
    spec: CropSpec,
    sample_n: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<PointCloud> {
    if sample_n == 0 || sample_n > images.count() {
        return Err(Error::InvalidArgument(format!(
            "cannot sample {sample_n} of {} images",
            images.count()
        )));
    }
    let mut rng = seeded(seed);
    let picked = index::sample(&mut rng, images.count(), sample_n).into_vec();
    crop_selected(images, &picked, spec, noise_sd, &mut rng)
}

/// `k` distinct indices below `count`, in sampling order.
pub fn sample_indices(count: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k > count {
        return Err(Error::InvalidArgument(format!("cannot sample {k} of {count} images")));
    }
    Ok(index::sample(&mut seeded(seed), count, k).into_vec())
}

/// Like [`crop_to_cloud`] for an explicit list of image indices.
pub fn crop_indices_to_cloud(
    images: &ImageSet,
    indices: &[usize],
    spec: CropSpec,
    noise_sd: f64,
    seed: u64,
) -> Result<PointCloud> {
    if let Some(&bad) = indices.iter().find(|&&i| i >= images.count()) {
        return Err(Error::InvalidArgument(format!(
            "image index {bad} out of range ({} images)",
            images.count()
        )));
    }
    crop_selected(images, indices, spec, noise_sd, &mut seeded(seed))
}

fn crop_selected(
    images: &ImageSet,
    indices: &[usize],
    spec: CropSpec,
    noise_sd: f64,
    rng: &mut ChaCha8Rng,
) -> Result<PointCloud> {
    if indices.is_empty() {
        return Err(Error::InvalidArgument("no images selected".into()));
    }
    let (h, w) = (images.height(), images.width());
    let (r0, c0) = spec.origin(h, w)?;
    if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise sd must be >= 0, got {noise_sd}")));
    }
    let noise = Normal::new(0.0, noise_sd).expect("validated sd");
    let mut scaled = vec![0.0; h * w];
    let mut coords = Vec::with_capacity(indices.len() * spec.size * spec.size);
    for &i in indices {
        // Noise covers the whole image and is drawn before cropping.
        for (s, &px) in scaled.iter_mut().zip(images.image(i)) {
            *s = f64::from(px) / 255.0;
            if noise_sd > 0.0 {
                *s += noise.sample(rng);
            }
        }
        for r in r0..r0 + spec.size {
            coords.extend_from_slice(&scaled[r * w + c0..r * w + c0 + spec.size]);
        }
    }
    PointCloud::from_flat(spec.size * spec.size, coords)
}

/// Permutes the coordinates of every point by its own random permutation.
pub fn shuffle_pixels(cloud: &PointCloud, seed: u64) -> PointCloud {
    let mut rng = seeded(seed);
    let mut coords = cloud.coords().to_vec();
    for p in coords.chunks_exact_mut(cloud.dim()) {
        p.shuffle(&mut rng);
    }
    PointCloud::from_flat(cloud.dim(), coords).expect("permutation keeps shape")
}

/// Synthetic stand-in for an object-centred digit dataset.
///
/// Every image carries a bright Gaussian spot orbiting the image centre at a
/// random phase (so the centre crops of many images trace out a loop in pixel
/// space), on top of faint uniform background speckle.
pub fn gen_structured_center_images(
    count: usize,
    side: usize,
    seed: u64,
) -> Result<ImageSet> {
    if side < 10 {
        return Err(Error::InvalidArgument(format!("image side {side} < 10")));
    }
    const ORBIT: f64 = 2.5;
    const SPOT_SD: f64 = 1.2;
    const SPECKLE: u8 = 24;
    let mut rng = seeded(seed);
    let mid = (side as f64 - 1.0) / 2.0;
    let mut pixels = Vec::with_capacity(count * side * side);
    for _ in 0..count {
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let (sy, sx) = (mid + ORBIT * phase.sin(), mid + ORBIT * phase.cos());
        for r in 0..side {
            for c in 0..side {
                let d2 = (r as f64 - sy).powi(2) + (c as f64 - sx).powi(2);
                let spot = 255.0 * (-d2 / (2.0 * SPOT_SD * SPOT_SD)).exp();
                let speckle = f64::from(rng.random_range(0..=SPECKLE));
                pixels.push((spot + speckle).min(255.0).round() as u8);
            }
        }
    }
    ImageSet::new(count, side, side, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_set() -> ImageSet {
        ImageSet::new(2, 3, 3, (0u8..18).collect()).unwrap()
    }

    #[test]
    fn sampled_indices_are_distinct() {
        let idx = sample_indices(50, 40, 3).unwrap();
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 40);
        assert!(idx.iter().all(|&i| i < 50));
        assert_eq!(idx, sample_indices(50, 40, 3).unwrap());
        assert!(sample_indices(5, 6, 0).is_err());
    }

    #[test]
    fn idx_round_trip() {
        let set = tiny_set();
        let bytes = set.to_idx_bytes();
        assert_eq!(&bytes[..4], &[0, 0, 8, 3]);
        let back = ImageSet::from_idx_bytes(&bytes).unwrap();
        assert_eq!((back.count(), back.height(), back.width()), (2, 3, 3));
        assert_eq!(back, set);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("set.idx");
        set.write_idx(&path).unwrap();
        assert_eq!(read_idx(&path).unwrap(), set);
    }

    #[test]
    fn idx_errors_are_distinct() {
        assert_eq!(ImageSet::from_idx_bytes(&[]), Err(IdxError::TruncatedHeader(0)));
        let good = tiny_set().to_idx_bytes();
        assert_eq!(
            ImageSet::from_idx_bytes(&good[..10]),
            Err(IdxError::TruncatedHeader(10))
        );
        let mut bad = good.clone();
        bad[2] = 0x09;
        assert!(matches!(ImageSet::from_idx_bytes(&bad), Err(IdxError::BadMagic(_))));
        let mut two_dims = good.clone();
        two_dims[3] = 1;
        assert_eq!(ImageSet::from_idx_bytes(&two_dims), Err(IdxError::DimensionCount(1)));

        // declares 5 images, carries 4
        let four = ImageSet::new(4, 3, 3, vec![7; 36]).unwrap();
        let mut bytes = four.to_idx_bytes();
        bytes[4..8].copy_from_slice(&5u32.to_be_bytes());
        assert_eq!(
            ImageSet::from_idx_bytes(&bytes),
            Err(IdxError::TruncatedPayload { expected: 45, actual: 36 })
        );
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(read_idx("/nonexistent/x.idx"), Err(Error::Io { .. })));
    }

    #[test]
    fn center_crop_shape() {
        let set = gen_structured_center_images(250, 28, 1).unwrap();
        let cloud = crop_to_cloud(&set, CropSpec::default(), 200, 0.1, 2).unwrap();
        assert_eq!((cloud.n(), cloud.dim()), (200, 100));
        assert_eq!(CropSpec::default().origin(28, 28).unwrap(), (9, 9));
        assert_eq!(CropSpec::default().origin(11, 12).unwrap(), (0, 1));
    }

    #[test]
    fn zero_images_give_zero_points() {
        let set = ImageSet::new(5, 12, 12, vec![0; 5 * 144]).unwrap();
        let cloud = crop_to_cloud(&set, CropSpec::default(), 5, 0.0, 0).unwrap();
        assert!(cloud.coords().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn corner_crop_index_arithmetic() {
        let pixels: Vec<u8> = (0..28 * 28).map(|k| (k % 251) as u8).collect();
        let set = ImageSet::new(1, 28, 28, pixels.clone()).unwrap();
        let spec = CropSpec::new(CropRegion::CornerTopLeft, 10);
        let cloud = crop_to_cloud(&set, spec, 1, 0.0, 0).unwrap();
        let p = cloud.point(0);
        for r in 0..10 {
            for c in 0..10 {
                assert_eq!(p[r * 10 + c], f64::from(pixels[r * 28 + c]) / 255.0);
            }
        }
    }

    #[test]
    fn crop_errors() {
        let set = tiny_set();
        assert!(crop_to_cloud(&set, CropSpec::default(), 1, 0.0, 0).is_err());
        let spec = CropSpec::new(CropRegion::Center, 2);
        assert!(crop_to_cloud(&set, spec, 3, 0.0, 0).is_err());
        assert!(crop_to_cloud(&set, spec, 2, 0.0, 0).is_ok());
    }

    #[test]
    fn shuffle_preserves_coordinate_multisets() {
        let one_d = PointCloud::new(vec![vec![1.0], vec![2.0]]).unwrap();
        assert_eq!(shuffle_pixels(&one_d, 3), one_d);

        let set = gen_structured_center_images(200, 28, 5).unwrap();
        let cloud = crop_to_cloud(&set, CropSpec::default(), 200, 0.05, 6).unwrap();
        let shuffled = shuffle_pixels(&cloud, 7);
        assert_eq!((shuffled.n(), shuffled.dim()), (cloud.n(), cloud.dim()));
        let sorted = |p: &[f64]| {
            let mut v = p.to_vec();
            v.sort_by(f64::total_cmp);
            v
        };
        for (a, b) in cloud.points().zip(shuffled.points()) {
            assert_eq!(sorted(a), sorted(b));
        }
    }

    #[test]
    fn shuffle_uses_distinct_permutations() {
        // Points whose coordinates are 0..100 expose the permutation directly.
        let base: Vec<f64> = (0..100).map(f64::from).collect();
        let cloud = PointCloud::new(vec![base; 200]).unwrap();
        let shuffled = shuffle_pixels(&cloud, 1);
        let first = shuffled.point(0);
        let differing = shuffled.points().filter(|p| *p != first).count();
        assert!(differing >= 1);
    }
}
