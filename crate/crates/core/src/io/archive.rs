//! Binary draw archive.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! magic      8 bytes  "NETMIXDA"
//! version    u32
//! header     u32 length, then JSON (fit metadata and counts)
//! trace      f64 × n_iter
//! draws      per draw: p_case f64, hypothesis u8, z f64 × L, ν_0 f64 × H,
//!            ν_1 f64 × H, per component (X f64 × V·R, λ f64 × R, ϑ f64 × R),
//!            assignments u32 × n, and π f64 × H·L when recorded
//! checksum   SHA-256 of everything above
//! ```
//!
//! Decoding checks the exact expected length before allocating anything and
//! validates every draw.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{ComponentFactors, Hypothesis, MixtureParameters};
use crate::priors::lambda_from_theta;
use crate::sampler::{Draw, DrawsMeta, PosteriorDraws};

pub const MAGIC: &[u8; 8] = b"NETMIXDA";
pub const VERSION: u32 = 1;

const MAX_HEADER: usize = 1 << 20;
const MAX_NODES: usize = 4096;
const MAX_COMPONENTS: usize = 1 << 12;
const MAX_RANK: usize = 1 << 10;
const CHECKSUM_LEN: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    meta: DrawsMeta,
    draws: usize,
    trace: usize,
    record_pi: bool,
}

fn archive_error(message: impl Into<String>) -> Error {
    Error::Archive(message.into())
}

/// Bytes per draw, or `None` on overflow.
fn draw_size(meta: &DrawsMeta, record_pi: bool) -> Option<usize> {
    let (v, h, r) = (meta.nodes, meta.components, meta.rank);
    let l = v.checked_mul(v.checked_sub(1)?)? / 2;
    let per_component = v.checked_mul(r)?.checked_add(r.checked_mul(2)?)?;
    let mut floats = 1usize
        .checked_add(l)?
        .checked_add(h.checked_mul(2)?)?
        .checked_add(h.checked_mul(per_component)?)?;
    if record_pi {
        floats = floats.checked_add(h.checked_mul(l)?)?;
    }
    floats
        .checked_mul(8)?
        .checked_add(1)?
        .checked_add(meta.n_subjects.checked_mul(4)?)
}

fn put_f64s(out: &mut Vec<u8>, values: &[f64]) {
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

pub fn encode_archive(draws: &PosteriorDraws) -> Result<Vec<u8>> {
    let meta = &draws.meta;
    let record_pi = draws.draws.first().is_some_and(|d| d.pi.is_some());
    let header = Header {
        meta: meta.clone(),
        draws: draws.draws.len(),
        trace: draws.log_joint_trace.len(),
        record_pi,
    };
    let header_json =
        serde_json::to_vec(&header).map_err(|e| archive_error(format!("header: {e}")))?;
    let size = draw_size(meta, record_pi).ok_or_else(|| archive_error("dimensions overflow"))?;
    let mut out = Vec::with_capacity(
        16 + header_json.len() + 8 * header.trace + size * header.draws + CHECKSUM_LEN,
    );
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(header_json.len() as u32).to_le_bytes());
    out.extend_from_slice(&header_json);
    put_f64s(&mut out, &draws.log_joint_trace);
    for d in &draws.draws {
        let p = &d.params;
        if p.nodes != meta.nodes
            || p.rank != meta.rank
            || p.n_components() != meta.components
            || d.assignments.len() != meta.n_subjects
            || d.pi.is_some() != record_pi
        {
            return Err(archive_error("draw dimensions disagree with the metadata"));
        }
        out.extend_from_slice(&p.p_case.to_le_bytes());
        out.push(u8::from(p.hypothesis.is_alternative()));
        put_f64s(&mut out, &p.z);
        put_f64s(&mut out, &p.nu[0]);
        put_f64s(&mut out, &p.nu[1]);
        for (c, theta) in p.components.iter().zip(&d.theta) {
            put_f64s(&mut out, c.coords());
            put_f64s(&mut out, c.lambda());
            put_f64s(&mut out, theta);
        }
        for &g in &d.assignments {
            out.extend_from_slice(&(g as u32).to_le_bytes());
        }
        if let Some(pi) = &d.pi {
            for row in pi {
                put_f64s(&mut out, row);
            }
        }
    }
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| archive_error("truncated"))?;
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|_| self.f64()).collect()
    }
}

fn check_meta(header: &Header) -> Result<()> {
    let meta = &header.meta;
    if meta.nodes < 2 || meta.nodes > MAX_NODES {
        return Err(archive_error(format!("unsupported node count {}", meta.nodes)));
    }
    if meta.components == 0 || meta.components > MAX_COMPONENTS {
        return Err(archive_error(format!(
            "unsupported component count {}",
            meta.components
        )));
    }
    if meta.rank == 0 || meta.rank > MAX_RANK {
        return Err(archive_error(format!("unsupported rank {}", meta.rank)));
    }
    if meta.hyper.components != meta.components || meta.hyper.rank != meta.rank {
        return Err(archive_error("dimensions disagree with the hyperparameters"));
    }
    if meta.group_sizes[0].checked_add(meta.group_sizes[1]) != Some(meta.n_subjects) {
        return Err(archive_error("group sizes do not add up to the subject count"));
    }
    meta.hyper.validate()?;
    meta.config.validate()?;
    if header.draws != meta.config.kept_draws() || header.trace != meta.config.n_iter {
        return Err(archive_error("draw counts disagree with the sampling schedule"));
    }
    if header.record_pi != meta.config.record_pi {
        return Err(archive_error("recorded probabilities disagree with the configuration"));
    }
    Ok(())
}

fn decode_draw(cur: &mut Cursor<'_>, meta: &DrawsMeta, record_pi: bool) -> Result<Draw> {
    let (v, h, r) = (meta.nodes, meta.components, meta.rank);
    let l = v * (v - 1) / 2;
    let p_case = cur.f64()?;
    let hypothesis = match cur.take(1)?[0] {
        0 => Hypothesis::Null,
        1 => Hypothesis::Alternative,
        other => return Err(archive_error(format!("invalid hypothesis byte {other}"))),
    };
    let z = cur.f64s(l)?;
    let nu = [cur.f64s(h)?, cur.f64s(h)?];
    let mut components = Vec::with_capacity(h);
    let mut theta = Vec::with_capacity(h);
    for _ in 0..h {
        let coords = cur.f64s(v * r)?;
        let lambda = cur.f64s(r)?;
        let th = cur.f64s(r)?;
        if th.iter().any(|&t| !(t > 0.0 && t.is_finite())) || lambda_from_theta(&th) != lambda {
            return Err(archive_error("shrinkage weights disagree with their auxiliaries"));
        }
        components.push(ComponentFactors::new(v, r, coords, lambda)?);
        theta.push(th);
    }
    let assignments = (0..meta.n_subjects)
        .map(|_| {
            let g = cur.u32()? as usize;
            if g < h {
                Ok(g)
            } else {
                Err(archive_error(format!("assignment {g} out of range")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let pi = if record_pi {
        Some((0..h).map(|_| cur.f64s(l)).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    let params = MixtureParameters {
        nodes: v,
        rank: r,
        z,
        components,
        nu,
        p_case,
        hypothesis,
    };
    params.validate()?;
    Ok(Draw {
        params,
        theta,
        assignments,
        pi,
    })
}

pub fn decode_archive(bytes: &[u8]) -> Result<PosteriorDraws> {
    if bytes.len() < 16 + CHECKSUM_LEN {
        return Err(archive_error("truncated"));
    }
    if &bytes[..8] != MAGIC {
        return Err(archive_error("not a draw archive (bad magic)"));
    }
    let (body, digest) = bytes.split_at(bytes.len() - CHECKSUM_LEN);
    if Sha256::digest(body).as_slice() != digest {
        return Err(archive_error("archive checksum mismatch (corrupted file)"));
    }
    let mut cur = Cursor { bytes: body, pos: 8 };
    let version = cur.u32()?;
    if version != VERSION {
        return Err(archive_error(format!("unsupported version {version}")));
    }
    let header_len = cur.u32()? as usize;
    if header_len > MAX_HEADER {
        return Err(archive_error("header too large"));
    }
    let header: Header = serde_json::from_slice(cur.take(header_len)?)
        .map_err(|e| archive_error(format!("header: {e}")))?;
    check_meta(&header)?;
    let meta = &header.meta;
    let expected = draw_size(meta, header.record_pi)
        .and_then(|s| s.checked_mul(header.draws))
        .and_then(|s| s.checked_add(header.trace.checked_mul(8)?))
        .and_then(|s| s.checked_add(cur.pos));
    if expected != Some(body.len()) {
        return Err(archive_error("length disagrees with the header"));
    }
    let log_joint_trace = cur.f64s(header.trace)?;
    let draws = (0..header.draws)
        .map(|_| decode_draw(&mut cur, meta, header.record_pi))
        .collect::<Result<Vec<_>>>()?;
    Ok(PosteriorDraws {
        meta: header.meta,
        draws,
        log_joint_trace,
    })
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    use std::io::Write;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut builder = tempfile::Builder::new();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(std::fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn write_archive(path: &Path, draws: &PosteriorDraws) -> Result<()> {
    write_atomic(path, &encode_archive(draws)?)
}

pub fn read_archive(path: &Path) -> Result<PosteriorDraws> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_archive(&bytes).map_err(|e| Error::InFile {
        path: path.display().to_string(),
        source: Box::new(e),
    })
}

/// One row per draw: `p_Y(1)`, `T`, weights, shrinkage weights and `Z`.
pub fn export_draws_csv(draws: &PosteriorDraws) -> String {
    let meta = &draws.meta;
    let l = meta.nodes * (meta.nodes - 1) / 2;
    let mut header = vec!["draw".to_string(), "p_case".into(), "hypothesis".into()];
    for y in 0..2 {
        header.extend((1..=meta.components).map(|h| format!("nu{y}_{h}")));
    }
    for h in 1..=meta.components {
        header.extend((1..=meta.rank).map(|r| format!("lambda_{h}_{r}")));
    }
    header.extend((1..=l).map(|i| format!("z_{i}")));
    let mut out = header.join(",");
    out.push('\n');
    for (i, d) in draws.draws.iter().enumerate() {
        let p = &d.params;
        let mut row = vec![
            (i + 1).to_string(),
            format!("{:?}", p.p_case),
            u8::from(p.hypothesis.is_alternative()).to_string(),
        ];
        row.extend(p.nu.iter().flatten().map(|w| format!("{w:?}")));
        row.extend(
            p.components
                .iter()
                .flat_map(|c| c.lambda().iter().map(|x| format!("{x:?}"))),
        );
        row.extend(p.z.iter().map(|z| format!("{z:?}")));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn export_trace_csv(draws: &PosteriorDraws) -> String {
    let mut out = String::from("iteration,log_joint\n");
    for (i, v) in draws.log_joint_trace.iter().enumerate() {
        out.push_str(&format!("{},{v:?}\n", i + 1));
    }
    out
}
