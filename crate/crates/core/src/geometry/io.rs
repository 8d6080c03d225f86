//! Point cloud and depth image files.
//!
//! * Point clouds: text, one `x y z` triple per line in meters (camera
//!   frame). Blank lines and lines starting with `#` are skipped.
//! * Depth images, chosen by extension:
//!   * `.pgm`: binary PGM (`P5`) with depths in millimeters, 16-bit
//!     big-endian samples when maxval > 255. Zero marks an invalid pixel.
//!   * `.pfm`: grayscale PFM (`Pf`) with 32-bit float depths in meters.
//!     Rows are stored bottom to top; a negative scale means little-endian.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{DepthImage, PointCloud};
use crate::math::Vec3;
use crate::scalar::Real;

fn malformed(what: &'static str, detail: impl Into<String>) -> Error {
    Error::Format {
        what,
        detail: detail.into(),
    }
}

pub fn parse_point_cloud<T: Real, R: BufRead>(r: R) -> Result<PointCloud<T>> {
    let mut points = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<T> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<T>()
                    .map_err(|_| malformed("point cloud", format!("line {}: bad number `{t}`", n + 1)))
            })
            .collect::<Result<_>>()?;
        if vals.len() != 3 {
            return Err(malformed(
                "point cloud",
                format!("line {}: expected 3 values, got {}", n + 1, vals.len()),
            ));
        }
        points.push(Vec3::new(vals[0], vals[1], vals[2]));
    }
    Ok(PointCloud::new(points))
}

pub fn write_point_cloud<T: Real, W: Write>(cloud: &PointCloud<T>, mut w: W) -> Result<()> {
    for p in cloud.points() {
        writeln!(w, "{} {} {}", p.x, p.y, p.z)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_point_cloud<T: Real>(path: &Path) -> Result<PointCloud<T>> {
    parse_point_cloud(BufReader::new(File::open(path)?))
}

/// Reads whitespace-separated header tokens, skipping `#` comments, and
/// consumes the single whitespace byte that ends the header.
fn header_tokens<R: BufRead>(r: &mut R, n: usize, what: &'static str) -> Result<Vec<String>> {
    let mut tokens = Vec::with_capacity(n);
    let mut cur = String::new();
    let mut byte = [0u8; 1];
    while tokens.len() < n {
        if r.read(&mut byte)? == 0 {
            return Err(malformed(what, "truncated header"));
        }
        let b = byte[0];
        if b == b'#' && cur.is_empty() {
            let mut skip = Vec::new();
            r.read_until(b'\n', &mut skip)?;
        } else if b.is_ascii_whitespace() {
            if !cur.is_empty() {
                tokens.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(b as char);
        }
    }
    Ok(tokens)
}

fn parse_usize(tok: &str, what: &'static str) -> Result<usize> {
    tok.parse().map_err(|_| malformed(what, format!("bad integer `{tok}`")))
}

pub fn parse_pgm<T: Real, R: Read>(r: R) -> Result<DepthImage<T>> {
    let mut r = BufReader::new(r);
    let tok = header_tokens(&mut r, 4, "pgm")?;
    if tok[0] != "P5" {
        return Err(malformed("pgm", format!("unsupported magic `{}`", tok[0])));
    }
    let (w, h) = (parse_usize(&tok[1], "pgm")?, parse_usize(&tok[2], "pgm")?);
    let maxval = parse_usize(&tok[3], "pgm")?;
    if maxval == 0 || maxval > 65535 {
        return Err(malformed("pgm", format!("maxval {maxval} out of range")));
    }
    let bytes_per = if maxval > 255 { 2 } else { 1 };
    let mut raw = vec![0u8; w * h * bytes_per];
    r.read_exact(&mut raw)
        .map_err(|_| malformed("pgm", "truncated pixel data"))?;
    let mm_to_m = T::lit(1e-3);
    let depths = if bytes_per == 2 {
        raw.chunks_exact(2)
            .map(|c| T::from_u16(u16::from_be_bytes([c[0], c[1]])).unwrap() * mm_to_m)
            .collect()
    } else {
        raw.iter().map(|&b| T::from_u8(b).unwrap() * mm_to_m).collect()
    };
    DepthImage::new(w, h, depths)
}

/// Writes a 16-bit millimeter PGM. Invalid pixels and depths that do not
/// fit in 16 bits are written as 0.
pub fn write_pgm<T: Real, W: Write>(img: &DepthImage<T>, mut w: W) -> Result<()> {
    write!(w, "P5\n{} {}\n65535\n", img.width(), img.height())?;
    let mut out = Vec::with_capacity(img.depths().len() * 2);
    for &d in img.depths() {
        let mm = if DepthImage::is_valid_depth(d) {
            (d * T::lit(1000.0)).round().to_f64().unwrap_or(0.0)
        } else {
            0.0
        };
        let v = if (1.0..=65535.0).contains(&mm) { mm as u16 } else { 0 };
        out.extend_from_slice(&v.to_be_bytes());
    }
    w.write_all(&out)?;
    w.flush()?;
    Ok(())
}

pub fn parse_pfm<T: Real, R: Read>(r: R) -> Result<DepthImage<T>> {
    let mut r = BufReader::new(r);
    let tok = header_tokens(&mut r, 4, "pfm")?;
    if tok[0] != "Pf" {
        return Err(malformed(
            "pfm",
            format!("only grayscale `Pf` is supported, got `{}`", tok[0]),
        ));
    }
    let (w, h) = (parse_usize(&tok[1], "pfm")?, parse_usize(&tok[2], "pfm")?);
    let scale: f64 = tok[3]
        .parse()
        .map_err(|_| malformed("pfm", format!("bad scale `{}`", tok[3])))?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(malformed("pfm", "scale must be non-zero"));
    }
    let little = scale < 0.0;
    let mut raw = vec![0u8; w * h * 4];
    r.read_exact(&mut raw)
        .map_err(|_| malformed("pfm", "truncated pixel data"))?;
    let mut depths = vec![T::zero(); w * h];
    for (i, c) in raw.chunks_exact(4).enumerate() {
        let b = [c[0], c[1], c[2], c[3]];
        let v = if little {
            f32::from_le_bytes(b)
        } else {
            f32::from_be_bytes(b)
        };
        let (row_from_bottom, col) = (i / w, i % w);
        let row = h - 1 - row_from_bottom;
        depths[row * w + col] = T::from_f32(v).unwrap_or_else(T::nan);
    }
    DepthImage::new(w, h, depths)
}

pub fn write_pfm<T: Real, W: Write>(img: &DepthImage<T>, mut w: W) -> Result<()> {
    let (width, height) = (img.width(), img.height());
    write!(w, "Pf\n{width} {height}\n-1.0\n")?;
    let mut out = Vec::with_capacity(width * height * 4);
    for row in (0..height).rev() {
        for col in 0..width {
            let d = img.get(col, row).to_f32().unwrap_or(f32::NAN);
            out.extend_from_slice(&d.to_le_bytes());
        }
    }
    w.write_all(&out)?;
    w.flush()?;
    Ok(())
}

enum DepthFormat {
    Pgm,
    Pfm,
}

fn depth_format(path: &Path) -> Result<DepthFormat> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("pgm") => Ok(DepthFormat::Pgm),
        Some("pfm") => Ok(DepthFormat::Pfm),
        _ => Err(malformed(
            "depth image",
            format!("{}: expected a .pgm or .pfm extension", path.display()),
        )),
    }
}

pub fn read_depth_image<T: Real>(path: &Path) -> Result<DepthImage<T>> {
    let format = depth_format(path)?;
    let f = File::open(path)?;
    match format {
        DepthFormat::Pgm => parse_pgm(f),
        DepthFormat::Pfm => parse_pfm(f),
    }
}

pub fn write_depth_image<T: Real>(img: &DepthImage<T>, path: &Path) -> Result<()> {
    let format = depth_format(path)?;
    let f = BufWriter::new(File::create(path)?);
    match format {
        DepthFormat::Pgm => write_pgm(img, f),
        DepthFormat::Pfm => write_pfm(img, f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DepthImage<f64> {
        DepthImage::new(3, 2, vec![1.0, 0.0, 2.5, 6.5, 0.001, f64::NAN]).unwrap()
    }

    #[test]
    fn pgm_round_trip_is_millimeter_exact() {
        let mut buf = Vec::new();
        write_pgm(&sample(), &mut buf).unwrap();
        assert!(buf.starts_with(b"P5\n3 2\n65535\n"));
        let back: DepthImage<f64> = parse_pgm(&buf[..]).unwrap();
        assert_eq!(back.depths(), &[1.0, 0.0, 2.5, 6.5, 0.001, 0.0]);
    }

    #[test]
    fn pfm_round_trip_keeps_row_order() {
        let mut buf = Vec::new();
        write_pfm(&sample(), &mut buf).unwrap();
        let back: DepthImage<f64> = parse_pfm(&buf[..]).unwrap();
        assert_eq!(back.get(0, 0), 1.0);
        assert_eq!(back.get(2, 0), 2.5);
        assert_eq!(back.get(0, 1), 6.5);
        assert!(back.get(2, 1).is_nan());
    }

    #[test]
    fn pgm_header_comments_and_8bit() {
        let data = b"P5\n# depth\n2 1\n255\n\x0a\x00";
        let img: DepthImage<f64> = parse_pgm(&data[..]).unwrap();
        assert!((img.get(0, 0) - 0.010).abs() < 1e-12);
        assert_eq!(img.get(1, 0), 0.0);
    }

    #[test]
    fn truncated_files_are_errors() {
        assert!(parse_pgm::<f64, _>(&b"P5\n2 2\n65535\n\x00"[..]).is_err());
        assert!(parse_pfm::<f64, _>(&b"Pf\n1 1\n-1.0\n\x00"[..]).is_err());
        assert!(parse_pgm::<f64, _>(&b"P2\n1 1\n255\n0"[..]).is_err());
    }

    #[test]
    fn point_cloud_text() {
        let text = "# comment\n1 2 3\n\n0.5 -0.25 4e-1\n";
        let c: PointCloud<f64> = parse_point_cloud(text.as_bytes()).unwrap();
        assert_eq!(c.points(), &[Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.5, -0.25, 0.4)]);
        let mut out = Vec::new();
        write_point_cloud(&c, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1 2 3\n0.5 -0.25 0.4\n");
        assert!(parse_point_cloud::<f64, _>("1 2".as_bytes()).is_err());
        assert!(parse_point_cloud::<f64, _>("1 2 x".as_bytes()).is_err());
    }

    #[test]
    fn extension_selects_format() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.PGM");
        write_depth_image(&sample(), &p).unwrap();
        assert_eq!(read_depth_image::<f64>(&p).unwrap().get(2, 0), 2.5);
        assert!(write_depth_image(&sample(), &dir.path().join("d.png")).is_err());
    }
}
