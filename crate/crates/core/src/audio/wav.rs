//! Minimal RIFF/WAVE reader and writer for 16-bit PCM.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const FORMAT_PCM: u16 = 0x0001;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

/// Decoded audio: mono samples in `[-1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavData {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

struct Format {
    tag: u16,
    channels: u16,
    sample_rate: u32,
    block_align: u16,
    bits: u16,
}

fn u16_at(b: &[u8], i: usize) -> u16 {
    u16::from_le_bytes([b[i], b[i + 1]])
}

fn u32_at(b: &[u8], i: usize) -> u32 {
    u32::from_le_bytes([b[i], b[i + 1], b[i + 2], b[i + 3]])
}

/// Reads a PCM 16-bit WAV file, averaging stereo to mono and scaling by 1/32768.
pub fn read_wav(path: impl AsRef<Path>) -> Result<WavData> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    decode_wav(&bytes, path)
}

/// Decodes an in-memory WAV image. `path` is used only in diagnostics.
pub fn decode_wav(bytes: &[u8], path: &Path) -> Result<WavData> {
    let truncated = |detail: &str| Error::TruncatedWav {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };
    let not_wav = |detail: &str| Error::NotWav {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };

    if bytes.len() < 12 {
        if bytes.len() >= 4 && &bytes[..4] != b"RIFF" {
            return Err(not_wav("missing RIFF tag"));
        }
        return Err(truncated("header shorter than 12 bytes"));
    }
    if &bytes[..4] != b"RIFF" {
        return Err(not_wav("missing RIFF tag"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(not_wav("missing WAVE tag"));
    }

    let mut format: Option<Format> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos < bytes.len() {
        if pos + 8 > bytes.len() {
            return Err(truncated("incomplete chunk header"));
        }
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let body_end = body_start
            .checked_add(size)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| truncated(&format!("chunk `{}` extends past end of file", String::from_utf8_lossy(id))))?;
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(truncated("fmt chunk shorter than 16 bytes"));
                }
                let mut tag = u16_at(body, 0);
                if tag == FORMAT_EXTENSIBLE && body.len() >= 26 {
                    tag = u16_at(body, 24);
                }
                format = Some(Format {
                    tag,
                    channels: u16_at(body, 2),
                    sample_rate: u32_at(body, 4),
                    block_align: u16_at(body, 12),
                    bits: u16_at(body, 14),
                });
            }
            b"data" => data = Some(body),
            _ => {}
        }
        // Chunks are word aligned.
        pos = body_end + (size & 1);
        if data.is_some() && format.is_some() {
            break;
        }
    }

    let format = format.ok_or_else(|| not_wav("missing fmt chunk"))?;
    let data = data.ok_or_else(|| not_wav("missing data chunk"))?;

    if format.tag != FORMAT_PCM {
        return Err(Error::UnsupportedEncoding {
            path: path.to_path_buf(),
            tag: format.tag,
        });
    }
    if format.bits != 16 {
        return Err(Error::UnsupportedBitDepth {
            path: path.to_path_buf(),
            bits: format.bits,
        });
    }
    if format.channels != 1 && format.channels != 2 {
        return Err(Error::UnsupportedChannels {
            path: path.to_path_buf(),
            channels: format.channels,
        });
    }
    let channels = format.channels as usize;
    let frame = 2 * channels;
    if format.block_align as usize != frame {
        return Err(not_wav("block alignment does not match channel layout"));
    }
    if data.len() % frame != 0 {
        return Err(truncated("data chunk ends mid-frame"));
    }

    let samples = data
        .chunks_exact(frame)
        .map(|f| {
            let sum: f64 = f
                .chunks_exact(2)
                .map(|s| i16::from_le_bytes([s[0], s[1]]) as f64 / 32768.0)
                .sum();
            sum / channels as f64
        })
        .collect();
    Ok(WavData {
        samples,
        sample_rate: format.sample_rate,
    })
}

/// Quantizes `samples` to 16-bit PCM and encodes a mono WAV image.
pub fn encode_wav(samples: &[f64], sample_rate: u32) -> Vec<u8> {
    let data_len = samples.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in samples {
        let q = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        out.extend_from_slice(&q.to_le_bytes());
    }
    out
}

pub fn write_wav(path: impl AsRef<Path>, samples: &[f64], sample_rate: u32) -> Result<()> {
    fs::write(path, encode_wav(samples, sample_rate))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pcm(channels: u16, frames: &[i16], tag: u16, bits: u16) -> Vec<u8> {
        let data: Vec<u8> = frames.iter().flat_map(|s| s.to_le_bytes()).collect();
        let mut out = Vec::new();
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&((36 + data.len()) as u32).to_le_bytes());
        out.extend_from_slice(b"WAVE");
        // An unrelated chunk with odd size, to exercise skipping and padding.
        out.extend_from_slice(b"LIST");
        out.extend_from_slice(&3u32.to_le_bytes());
        out.extend_from_slice(&[1, 2, 3, 0]);
        out.extend_from_slice(b"fmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&tag.to_le_bytes());
        out.extend_from_slice(&channels.to_le_bytes());
        out.extend_from_slice(&16000u32.to_le_bytes());
        out.extend_from_slice(&(16000u32 * 2 * channels as u32).to_le_bytes());
        out.extend_from_slice(&(2 * channels).to_le_bytes());
        out.extend_from_slice(&bits.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&(data.len() as u32).to_le_bytes());
        out.extend_from_slice(&data);
        out
    }

    fn p() -> &'static Path {
        Path::new("test.wav")
    }

    #[test]
    fn mono_scaling() {
        let wav = decode_wav(&pcm(1, &[0, 16384, -32768], FORMAT_PCM, 16), p()).unwrap();
        assert_eq!(wav.samples, vec![0.0, 0.5, -1.0]);
        assert_eq!(wav.sample_rate, 16000);
    }

    #[test]
    fn stereo_is_averaged() {
        let wav = decode_wav(&pcm(2, &[16384, -16384, 16384, 16384], FORMAT_PCM, 16), p()).unwrap();
        assert_eq!(wav.samples, vec![0.0, 0.5]);
    }

    #[test]
    fn distinct_diagnostics() {
        let err = decode_wav(&pcm(1, &[0, 1], 3, 16), p()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedEncoding { tag: 3, .. }));
        assert!(err.to_string().contains("unsupported encoding"));

        let err = decode_wav(&pcm(1, &[0, 1], FORMAT_PCM, 24), p()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedBitDepth { bits: 24, .. }));

        let mut bytes = pcm(1, &[0, 1, 2, 3], FORMAT_PCM, 16);
        bytes.truncate(bytes.len() - 3);
        assert!(matches!(decode_wav(&bytes, p()), Err(Error::TruncatedWav { .. })));

        assert!(matches!(decode_wav(b"RIFF", p()), Err(Error::TruncatedWav { .. })));
        assert!(matches!(decode_wav(b"OggS0000WAVE", p()), Err(Error::NotWav { .. })));
    }

    #[test]
    fn writer_round_trip_within_quantization() {
        let x: Vec<f64> = (0..500).map(|i| (i as f64 * 0.05).sin() * 0.9).collect();
        let wav = decode_wav(&encode_wav(&x, 8000), p()).unwrap();
        assert_eq!(wav.sample_rate, 8000);
        for (a, b) in x.iter().zip(&wav.samples) {
            assert!((a - b).abs() <= 0.5 / 32768.0 + 1e-15);
        }
    }
}
