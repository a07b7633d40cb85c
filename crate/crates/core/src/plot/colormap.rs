use super::PlotError;

/// Piecewise-linear RGB gradient through `(position, [r, g, b])` stops on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Colormap {
    pub stops: Vec<(f64, [u8; 3])>,
}

impl Colormap {
    pub fn viridis() -> Self {
        Colormap {
            stops: vec![
                (0.0, [68, 1, 84]),
                (0.125, [71, 44, 122]),
                (0.25, [59, 81, 139]),
                (0.375, [44, 113, 142]),
                (0.5, [33, 144, 141]),
                (0.625, [39, 173, 129]),
                (0.75, [92, 200, 99]),
                (0.875, [170, 220, 50]),
                (1.0, [253, 231, 37]),
            ],
        }
    }

    pub fn grayscale() -> Self {
        Colormap { stops: vec![(0.0, [0, 0, 0]), (1.0, [255, 255, 255])] }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "viridis" => Some(Colormap::viridis()),
            "gray" | "grayscale" => Some(Colormap::grayscale()),
            _ => None,
        }
    }

    pub(crate) fn check(&self) -> Result<(), PlotError> {
        let ok = self.stops.len() >= 2
            && self.stops.windows(2).all(|w| w[1].0 > w[0].0)
            && self.stops[0].0 == 0.0
            && self.stops[self.stops.len() - 1].0 == 1.0;
        if ok {
            Ok(())
        } else {
            Err(PlotError::BadStyle("colormap stops must increase from 0 to 1".into()))
        }
    }

    pub fn rgb(&self, t: f64) -> [u8; 3] {
        let t = if t.is_nan() { 0.5 } else { t.clamp(0.0, 1.0) };
        let k = self.stops.partition_point(|s| s.0 < t).clamp(1, self.stops.len() - 1);
        let (p0, c0) = self.stops[k - 1];
        let (p1, c1) = self.stops[k];
        let s = (t - p0) / (p1 - p0);
        let mix = |a: u8, b: u8| (a as f64 + s * (b as f64 - a as f64)).round() as u8;
        [mix(c0[0], c1[0]), mix(c0[1], c1[1]), mix(c0[2], c1[2])]
    }

    pub fn hex(&self, t: f64) -> String {
        let [r, g, b] = self.rgb(t);
        format!("#{r:02x}{g:02x}{b:02x}")
    }
}
