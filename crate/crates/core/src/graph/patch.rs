use nalgebra::DMatrix;

use super::nn::{auto_sigma, neighbour_arcs, weighted_graph, NnStrategy, Sigma};
use super::{Graph, GraphError};

/// Row-major `height x width x channels` image with `f64` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub data: Vec<f64>,
}

impl Image {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self, GraphError> {
        if data.len() != height * width * channels {
            return Err(GraphError::ShapeMismatch(format!(
                "{} samples for a {height}x{width}x{channels} image",
                data.len()
            )));
        }
        Ok(Image { height, width, channels, data })
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Image { height, width, channels: 1, data }
    }

    pub fn get(&self, r: usize, c: usize, ch: usize) -> f64 {
        self.data[(r * self.width + c) * self.channels + ch]
    }
}

/// Which pixels are candidate neighbours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchWindow {
    /// Pixels within this Chebyshev (square-window) radius.
    Local(usize),
    /// Every pixel.
    Global,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchGraphParams {
    /// Odd side length of the square patch.
    pub patch_size: usize,
    pub window: SearchWindow,
    pub k: usize,
    pub sigma: Sigma,
    /// Weight of the pixel coordinates appended to each feature vector; 0 disables.
    pub coord_scale: f64,
}

impl Default for PatchGraphParams {
    fn default() -> Self {
        PatchGraphParams { patch_size: 3, window: SearchWindow::Local(5), k: 8, sigma: Sigma::Auto, coord_scale: 0.0 }
    }
}

/// Symmetric padding: `-1 -> 0`, `-2 -> 1`, `n -> n - 1`.
fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let mut i = i;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - i - 1;
        } else {
            return i as usize;
        }
    }
}

fn features(image: &Image, params: &PatchGraphParams) -> DMatrix<f64> {
    let h = (params.patch_size / 2) as isize;
    let with_coords = params.coord_scale > 0.0;
    let dim = params.patch_size * params.patch_size * image.channels + if with_coords { 2 } else { 0 };
    let n = image.height * image.width;
    let mut f = DMatrix::zeros(n, dim);
    for r in 0..image.height {
        for c in 0..image.width {
            let v = r * image.width + c;
            let mut k = 0;
            for dr in -h..=h {
                let rr = reflect(r as isize + dr, image.height);
                for dc in -h..=h {
                    let cc = reflect(c as isize + dc, image.width);
                    for ch in 0..image.channels {
                        f[(v, k)] = image.get(rr, cc, ch);
                        k += 1;
                    }
                }
            }
            if with_coords {
                f[(v, k)] = params.coord_scale * r as f64;
                f[(v, k + 1)] = params.coord_scale * c as f64;
            }
        }
    }
    f
}

fn local_arcs(feat: &DMatrix<f64>, image: &Image, radius: usize, k: usize) -> Vec<(usize, usize, f64)> {
    let (hgt, wid) = (image.height, image.width);
    let mut arcs = Vec::new();
    for r in 0..hgt {
        for c in 0..wid {
            let v = r * wid + c;
            let mut cand = Vec::new();
            for rr in r.saturating_sub(radius)..=(r + radius).min(hgt - 1) {
                for cc in c.saturating_sub(radius)..=(c + radius).min(wid - 1) {
                    let u = rr * wid + cc;
                    if u != v {
                        cand.push(((feat.row(u) - feat.row(v)).norm_squared(), u));
                    }
                }
            }
            cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            arcs.extend(cand.into_iter().take(k).map(|(d2, u)| (v, u, d2.sqrt())));
        }
    }
    arcs
}

/// Graph with one vertex per pixel linking pixels whose surrounding patches
/// are similar.
///
/// Borders use symmetric padding. A finite [`SearchWindow::Local`] radius gives
/// a local graph, [`SearchWindow::Global`] a fully non-local one. When the
/// automatic kernel width comes out as zero (e.g. a constant image) it falls
/// back to 1, so identical patches get unit weight.
pub fn patch_graph(image: &Image, params: &PatchGraphParams) -> Result<Graph, GraphError> {
    let p = params.patch_size;
    if p == 0 || p % 2 == 0 {
        return Err(GraphError::BadParameter(format!("patch size must be odd, got {p}")));
    }
    if p > image.height || p > image.width {
        return Err(GraphError::PatchLargerThanImage { patch: p, height: image.height, width: image.width });
    }
    let n = image.height * image.width;
    if n < 2 {
        return Err(GraphError::SizeTooSmall("image needs at least two pixels".into()));
    }
    if params.k == 0 {
        return Err(GraphError::BadParameter("k must be positive".into()));
    }
    if params.k >= n {
        return Err(GraphError::KTooLarge { k: params.k, points: n });
    }
    let feat = features(image, params);
    let arcs = match params.window {
        SearchWindow::Global => neighbour_arcs(&feat, NnStrategy::Knn(params.k))?,
        SearchWindow::Local(radius) => local_arcs(&feat, image, radius.max(1), params.k),
    };
    let sigma = match params.sigma {
        Sigma::Fixed(s) if s > 0.0 && s.is_finite() => s,
        Sigma::Fixed(s) => return Err(GraphError::BadParameter(format!("sigma must be positive, got {s}"))),
        Sigma::Auto => {
            let s = auto_sigma(&arcs, n, NnStrategy::Knn(params.k));
            if s > 0.0 {
                s
            } else {
                1.0
            }
        }
    };
    let coords = DMatrix::from_fn(n, 2, |v, k| {
        if k == 0 {
            (v % image.width) as f64
        } else {
            (image.height - 1 - v / image.width) as f64
        }
    });
    Ok(weighted_graph(&arcs, n, sigma, Some(coords))?.with_name("patch"))
}
