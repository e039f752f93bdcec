//! CSV and JSON formats.
//!
//! * sampled functions: `x,re,im`, with `x` the exact decimal expansion of
//!   the dyadic sample position;
//! * spectra: `omega,re,im`; correlations: `n,re,im`;
//! * filters: `{"name", "offset", "coeffs": [[re, im], ...]}`.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Dyadic, DyadicGrid};
use crate::scalar::Real;
use crate::sequence::{FilterSequence, SpectrumSamples};
use crate::signal::SampledFunction;
use crate::spectra::{CorrelationSequence, FourierSamples};

fn parse_real<T: Real>(s: &str) -> Result<T> {
    let v: T = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidData(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::InvalidData(format!("non-finite value: {s:?}")));
    }
    Ok(v)
}

fn writer<W: Write>(w: W, header: [&str; 3]) -> Result<csv::Writer<W>> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(header)?;
    Ok(wr)
}

pub fn write_function_csv<T: Real, W: Write>(f: &SampledFunction<T>, w: W) -> Result<()> {
    let mut wr = writer(w, ["x", "re", "im"])?;
    for (k, v) in f.values().iter().enumerate() {
        wr.write_record([f.grid().point(k).to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

fn rows<R: Read>(r: R, header: [&str; 3]) -> Result<Vec<csv::StringRecord>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let h = rd.headers()?.clone();
    if h.iter().map(str::trim).ne(header.iter().copied()) {
        return Err(Error::InvalidData(format!(
            "expected header {}, found {}",
            header.join(","),
            h.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let out = rd.records().collect::<std::result::Result<Vec<_>, _>>()?;
    if out.iter().any(|r| r.len() != 3) {
        return Err(Error::InvalidData("every row needs three fields".into()));
    }
    Ok(out)
}

fn complex_at<T: Real>(r: &csv::StringRecord) -> Result<Complex<T>> {
    Ok(Complex::new(parse_real(&r[1])?, parse_real(&r[2])?))
}

/// Reads a function written by [`write_function_csv`]. The resolution is
/// recovered from the spacing (or, for one row, from the position of the
/// single midpoint); an empty file yields the zero function at resolution 0.
pub fn read_function_csv<T: Real, R: Read>(r: R) -> Result<SampledFunction<T>> {
    let recs = rows(r, ["x", "re", "im"])?;
    if recs.is_empty() {
        return Ok(SampledFunction::zero(0));
    }
    let xs = recs
        .iter()
        .map(|r| r[0].parse::<Dyadic>())
        .collect::<Result<Vec<_>>>()?;
    let resolution = if xs.len() == 1 {
        DyadicGrid::resolution_of_midpoint(xs[0])?
    } else {
        let step = xs[1].sub(xs[0]);
        match step.two_adic() {
            Some((1, e)) => -e,
            _ => return Err(Error::InvalidData(format!("spacing {step} is not a power of two"))),
        }
    };
    let grid = DyadicGrid::from_first_point(xs[0], resolution, xs.len())?;
    for (k, x) in xs.iter().enumerate() {
        if *x != grid.point(k) {
            return Err(Error::InvalidData(format!("row {} is off the uniform grid at {x}", k + 1)));
        }
    }
    let values = recs.iter().map(complex_at).collect::<Result<Vec<_>>>()?;
    SampledFunction::new(grid, values)
}

pub fn write_spectrum_csv<T: Real, W: Write>(s: &SpectrumSamples<T>, w: W) -> Result<()> {
    let mut wr = writer(w, ["omega", "re", "im"])?;
    for (m, v) in s.values().iter().enumerate() {
        wr.write_record([s.omega(m).to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_fourier_csv<T: Real, W: Write>(s: &FourierSamples<T>, w: W) -> Result<()> {
    let mut wr = writer(w, ["omega", "re", "im"])?;
    for (om, v) in s.omegas().iter().zip(s.values()) {
        wr.write_record([om.to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

/// Reads `omega,re,im` rows into [`FourierSamples`].
pub fn read_fourier_csv<T: Real, R: Read>(r: R) -> Result<FourierSamples<T>> {
    let recs = rows(r, ["omega", "re", "im"])?;
    let om = recs.iter().map(|r| parse_real(&r[0])).collect::<Result<Vec<T>>>()?;
    let vals = recs.iter().map(complex_at).collect::<Result<Vec<_>>>()?;
    FourierSamples::new(om, vals)
}

pub fn write_correlation_csv<T: Real, W: Write>(c: &CorrelationSequence<T>, w: W) -> Result<()> {
    write_sequence_csv(c.as_sequence(), w)
}

/// `n,re,im` rows over the stored support.
pub fn write_sequence_csv<T: Real, W: Write>(s: &FilterSequence<T>, w: W) -> Result<()> {
    let mut wr = writer(w, ["n", "re", "im"])?;
    for (n, v) in s.iter() {
        wr.write_record([n.to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FilterJson {
    name: String,
    offset: i64,
    coeffs: Vec<[f64; 2]>,
}

/// A filter together with its display name.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedFilter<T> {
    pub name: String,
    pub filter: FilterSequence<T>,
}

pub fn filter_to_json<T: Real>(name: &str, h: &FilterSequence<T>) -> serde_json::Value {
    let fj = FilterJson {
        name: name.to_string(),
        offset: h.offset(),
        coeffs: h
            .coeffs()
            .iter()
            .map(|c| [c.re.to_f64().unwrap(), c.im.to_f64().unwrap()])
            .collect(),
    };
    serde_json::to_value(fj).expect("plain struct serializes")
}

pub fn write_filter_json<T: Real, W: Write>(name: &str, h: &FilterSequence<T>, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, &filter_to_json(name, h))?;
    writeln!(w)?;
    Ok(())
}

pub fn filter_from_json<T: Real>(v: serde_json::Value) -> Result<NamedFilter<T>> {
    let fj: FilterJson = serde_json::from_value(v)?;
    let coeffs = fj
        .coeffs
        .iter()
        .map(|[re, im]| {
            if re.is_finite() && im.is_finite() {
                Ok(Complex::new(T::from_f64(*re).unwrap(), T::from_f64(*im).unwrap()))
            } else {
                Err(Error::InvalidData("filter coefficient is not finite".into()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NamedFilter {
        name: fj.name,
        filter: FilterSequence::new(fj.offset, coeffs),
    })
}

pub fn read_filter_json<T: Real, R: Read>(r: R) -> Result<NamedFilter<T>> {
    filter_from_json(serde_json::from_reader(r)?)
}

pub fn write_function_file<T: Real>(f: &SampledFunction<T>, path: &Path) -> Result<()> {
    write_function_csv(f, std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn read_function_file<T: Real>(path: &Path) -> Result<SampledFunction<T>> {
    read_function_csv(std::fs::File::open(path)?)
}

pub fn read_filter_file<T: Real>(path: &Path) -> Result<NamedFilter<T>> {
    read_filter_json(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn round_trip(f: &SampledFunction<f64>) -> SampledFunction<f64> {
        let mut buf = Vec::new();
        write_function_csv(f, &mut buf).unwrap();
        read_function_csv(buf.as_slice()).unwrap()
    }

    #[test]
    fn function_csv_round_trips_bit_exact() {
        for f in [
            fixtures::gaussian::<f64>(5, 2),
            fixtures::pulse(0),
            fixtures::pulse(0).dilate(-2),
            fixtures::sine(7, Dyadic::new(-3, 2), Dyadic::from_int(1)),
            fixtures::hat(3).translate(-7).scale(Complex::new(0.3, -1.0 / 3.0)),
        ] {
            assert_eq!(round_trip(&f), f);
        }
        assert_eq!(round_trip(&SampledFunction::zero(5)), SampledFunction::zero(0));
    }

    #[test]
    fn function_csv_format() {
        let mut buf = Vec::new();
        write_function_csv(&fixtures::pulse::<f64>(1), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,re,im\n0.25,1,0\n0.75,1,0\n");
    }

    #[test]
    fn function_csv_rejects_bad_input() {
        for text in [
            "x,re,im\n0.25,1,0\n0.5,1,0\n",
            "x,re,im\n0.25,1,0\n0.75,NaN,0\n",
            "x,re,im\n0.1,1,0\n",
            "a,b,c\n0.25,1,0\n",
            "x,re,im\n0.25,1,0\n0.75,1,0\n1.5,1,0\n",
        ] {
            assert!(read_function_csv::<f64, _>(text.as_bytes()).is_err(), "{text}");
        }
    }

    #[test]
    fn filter_json_round_trip() {
        let h = fixtures::daubechies4::<f64>();
        let mut buf = Vec::new();
        write_filter_json("db4", &h, &mut buf).unwrap();
        let back: NamedFilter<f64> = read_filter_json(buf.as_slice()).unwrap();
        assert_eq!(back.name, "db4");
        assert_eq!(back.filter, h);
        let padded = r#"{"name":"p","offset":-1,"coeffs":[[0,0],[1,0],[0,0]]}"#;
        let p: NamedFilter<f64> = read_filter_json(padded.as_bytes()).unwrap();
        assert_eq!(p.filter, FilterSequence::delta(0));
        assert!(read_filter_json::<f64, _>(r#"{"name":"x","offset":0,"coeffs":[[1e999,0]]}"#.as_bytes()).is_err());
        assert!(read_filter_json::<f64, _>("{not json".as_bytes()).is_err());
    }

    #[test]
    fn spectrum_and_sequence_csv() {
        let s = crate::sequence::dtft(&fixtures::haar_filter::<f64>(), 4).unwrap();
        let mut buf = Vec::new();
        write_spectrum_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("omega,re,im\n0,"));
        assert_eq!(text.lines().count(), 5);
        let mut buf = Vec::new();
        write_sequence_csv(&FilterSequence::<f64>::delta(-2), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,re,im\n-2,1,0\n");
        let f = crate::spectra::fourier_transform(&fixtures::hat::<f64>(3), &[0.0, 0.5]);
        let mut buf = Vec::new();
        write_fourier_csv(&f, &mut buf).unwrap();
        assert_eq!(read_fourier_csv::<f64, _>(buf.as_slice()).unwrap(), f);
    }
}
