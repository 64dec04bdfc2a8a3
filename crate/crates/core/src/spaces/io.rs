//! CSV forms: semimetrics as `atom,0,1,…` matrices, partitions as
//! `atom,label` vectors and masses as `atom,mass` vectors, one header row each.

use std::io::{Read, Write};
use std::sync::Arc;

use num_rational::Ratio;

use super::{FiniteProbSpace, Partition, Semimetric};
use crate::{Error, Result};

pub fn write_semimetric_csv<W: Write>(out: W, rho: &Semimetric) -> Result<()> {
    let n = rho.len();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["atom".to_string()];
    header.extend((0..n).map(|i| i.to_string()));
    w.write_record(&header)?;
    for x in 0..n {
        let mut row = vec![x.to_string()];
        row.extend(rho.row(x).iter().map(|v| format!("{v:?}")));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_semimetric_csv<R: Read>(input: R, space: Arc<FiniteProbSpace>) -> Result<Semimetric> {
    let n = space.len();
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    if r.headers()?.len() != n + 1 {
        return Err(Error::invalid(format!("expected {} columns", n + 1)));
    }
    let mut data = vec![f64::NAN; n * n];
    let mut seen = vec![false; n];
    for record in r.records() {
        let record = record?;
        let x: usize = parse(&record[0])?;
        if x >= n || seen[x] || record.len() != n + 1 {
            return Err(Error::invalid(format!("bad semimetric row for atom {}", &record[0])));
        }
        seen[x] = true;
        for y in 0..n {
            data[x * n + y] = parse(&record[y + 1])?;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::invalid("semimetric CSV is missing rows"));
    }
    Semimetric::new(space, data)
}

pub fn write_partition_csv<W: Write>(out: W, xi: &Partition) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["atom", "label"])?;
    for (atom, label) in xi.labels().iter().enumerate() {
        w.write_record([atom.to_string(), label.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_partition_csv<R: Read>(input: R, space: Arc<FiniteProbSpace>) -> Result<Partition> {
    let n = space.len();
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut labels: Vec<Option<u64>> = vec![None; n];
    for record in r.records() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::invalid("partition rows need two columns"));
        }
        let atom: usize = parse(&record[0])?;
        if atom >= n || labels[atom].is_some() {
            return Err(Error::invalid(format!("bad partition row for atom {atom}")));
        }
        labels[atom] = Some(parse(&record[1])?);
    }
    let labels: Option<Vec<u64>> = labels.into_iter().collect();
    let labels = labels.ok_or_else(|| Error::invalid("partition CSV is missing atoms"))?;
    Partition::new(space, &labels)
}

/// Masses given either all as exact ratios (`3/10`, `1`) or as floats.
pub fn read_masses_csv<R: Read>(input: R) -> Result<Arc<FiniteProbSpace>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut fields: Vec<Option<String>> = Vec::new();
    for record in r.records() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::invalid("mass rows need two columns"));
        }
        let atom: usize = parse(&record[0])?;
        if atom >= fields.len() {
            fields.resize(atom + 1, None);
        }
        if fields[atom].replace(record[1].trim().to_string()).is_some() {
            return Err(Error::invalid(format!("atom {atom} listed twice")));
        }
    }
    let fields: Vec<String> = fields
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::invalid("mass CSV is missing atoms"))?;
    let exact: Option<Vec<Ratio<u64>>> = fields.iter().map(|f| f.parse().ok()).collect();
    match exact {
        Some(ratios) => FiniteProbSpace::from_ratios(ratios),
        None => FiniteProbSpace::from_masses(fields.iter().map(|f| parse(f)).collect::<Result<_>>()?),
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("cannot parse CSV field {s:?}")))
}
