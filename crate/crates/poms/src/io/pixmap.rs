use std::path::Path;

use crate::io::{atomic_write, IoError};

/// An RGBA8 image buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pixmap {
    pub width: u32,
    pub height: u32,
    pub rgba: Vec<u8>,
}

impl Pixmap {
    pub fn new(width: u32, height: u32) -> Pixmap {
        Pixmap {
            width,
            height,
            rgba: vec![0; width as usize * height as usize * 4],
        }
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 4] {
        let i = (y as usize * self.width as usize + x as usize) * 4;
        [
            self.rgba[i],
            self.rgba[i + 1],
            self.rgba[i + 2],
            self.rgba[i + 3],
        ]
    }

    pub fn set_pixel(&mut self, x: u32, y: u32, px: [u8; 4]) {
        let i = (y as usize * self.width as usize + x as usize) * 4;
        self.rgba[i..i + 4].copy_from_slice(&px);
    }

    /// Raw bytes of the `w x h` rectangle at `(x, y)`, row-major.
    pub fn rect_bytes(&self, x: u32, y: u32, w: u32, h: u32) -> Vec<u8> {
        let mut out = Vec::with_capacity((w * h * 4) as usize);
        for row in y..y + h {
            let start = (row as usize * self.width as usize + x as usize) * 4;
            out.extend_from_slice(&self.rgba[start..start + w as usize * 4]);
        }
        out
    }

    /// Copy the `w x h` rectangle from `src` at `(sx, sy)` to `(dx, dy)`.
    #[allow(clippy::too_many_arguments)]
    pub fn blit(&mut self, src: &Pixmap, sx: u32, sy: u32, w: u32, h: u32, dx: u32, dy: u32) {
        for row in 0..h {
            let s = ((sy + row) as usize * src.width as usize + sx as usize) * 4;
            let d = ((dy + row) as usize * self.width as usize + dx as usize) * 4;
            self.rgba[d..d + w as usize * 4].copy_from_slice(&src.rgba[s..s + w as usize * 4]);
        }
    }

    pub fn load_png(path: &Path) -> Result<Pixmap, IoError> {
        let file = std::fs::File::open(path)?;
        let mut decoder = png::Decoder::new(std::io::BufReader::new(file));
        decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
        let mut reader = decoder.read_info()?;
        let mut buf = vec![
            0;
            reader
                .output_buffer_size()
                .ok_or_else(|| IoError::Format("png too large".into()))?
        ];
        let info = reader.next_frame(&mut buf)?;
        buf.truncate(info.buffer_size());

        let (width, height) = (info.width, info.height);
        let rgba = match info.color_type {
            png::ColorType::Rgba => buf,
            png::ColorType::Rgb => buf
                .chunks_exact(3)
                .flat_map(|p| [p[0], p[1], p[2], 255])
                .collect(),
            png::ColorType::Grayscale => buf.iter().flat_map(|&g| [g, g, g, 255]).collect(),
            png::ColorType::GrayscaleAlpha => buf
                .chunks_exact(2)
                .flat_map(|p| [p[0], p[0], p[0], p[1]])
                .collect(),
            other => {
                return Err(IoError::Format(format!(
                    "unsupported png color type {other:?}"
                )))
            }
        };
        Ok(Pixmap {
            width,
            height,
            rgba,
        })
    }

    pub fn encode_png(&self) -> Result<Vec<u8>, IoError> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Rgba);
            enc.set_depth(png::BitDepth::Eight);
            let mut writer = enc.write_header()?;
            writer.write_image_data(&self.rgba)?;
        }
        Ok(out)
    }

    pub fn save_png(&self, path: &Path) -> Result<(), IoError> {
        atomic_write(path, &self.encode_png()?)
    }
}
