//! Coded placement, multicast delivery and per-user decoding.
//!
//! Each file is cut into D = Y_r subfiles, MDS-encoded into b coded subfiles
//! indexed by the blocks of the design, and cache i stores every coded subfile
//! whose block contains i. For an online set I, each label of `B_j` becomes
//! one transmission: the XOR of W^c_{d_U, A} over the label's cells, with
//! rows mapped to ζ_j(I) and columns to τ_j(I).
//!
//! File indices are 0-based; cache and point indices are 1-based.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::{c, k_subsets, Point, PointSet};
use crate::error::{Error, Result};
use crate::hppda::{Feasibility, GeneralizedHpPda};
use crate::mds::{FileLayout, MdsCode, Subfile};
use crate::pda::Label;

/// The file library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Library {
    files: Vec<Vec<u8>>,
    seed: Option<u64>,
}

impl Library {
    pub fn new(files: Vec<Vec<u8>>) -> Result<Self> {
        if files.is_empty() {
            return Err(Error::InvalidParameter(
                "library needs at least one file".into(),
            ));
        }
        Ok(Library { files, seed: None })
    }

    /// `n` pseudo-random files of `byte_len` bytes, reproducible from `seed`.
    pub fn random(n: usize, byte_len: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let files = (0..n)
            .map(|_| (0..byte_len).map(|_| rng.gen()).collect())
            .collect();
        let mut lib = Library::new(files)?;
        lib.seed = Some(seed);
        Ok(lib)
    }

    /// Every regular file in `dir`, in file-name order.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        paths.sort();
        let files = paths
            .iter()
            .map(std::fs::read)
            .collect::<std::io::Result<_>>()?;
        Library::new(files)
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    pub fn file(&self, n: usize) -> &[u8] {
        &self.files[n]
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Coded subfiles held by one cache, keyed by (file, block index).
#[derive(Debug, Clone)]
pub struct CacheContents {
    pub cache: Point,
    pub entries: BTreeMap<(usize, usize), Subfile>,
}

impl CacheContents {
    pub fn get(&self, file: usize, block: usize) -> Option<&Subfile> {
        self.entries.get(&(file, block))
    }
}

/// A placed scheme: arrays, code, server-side coded library and cache contents.
#[derive(Debug, Clone)]
pub struct SchemeInstance {
    hppda: GeneralizedHpPda,
    feasibility: Feasibility,
    code: MdsCode,
    layout: FileLayout,
    file_lens: Vec<usize>,
    coded: Vec<Vec<Subfile>>,
    caches: Vec<CacheContents>,
}

/// Splits, encodes and places the library.
pub fn place(hppda: GeneralizedHpPda, library: &Library) -> Result<SchemeInstance> {
    let feasibility = hppda.feasibility()?;
    if !feasibility.passes() {
        return Err(Error::Infeasible(format!(
            "Y = {:?} violates Y_j ≤ Y_(j−1) at j = {:?}",
            feasibility.y, feasibility.violations
        )));
    }
    let design = hppda.design();
    let d = feasibility.subpacketization() as usize;
    let code = MdsCode::new(design.b(), d)?;
    let byte_len = (0..library.len())
        .map(|n| library.file(n).len())
        .max()
        .unwrap_or(0);
    let layout = FileLayout::new(code.field().m(), d, byte_len);

    let coded = (0..library.len())
        .map(|n| code.encode(&layout.split(library.file(n))?))
        .collect::<Result<Vec<_>>>()?;

    let caches = (1..=design.v())
        .map(|cache| {
            let mut entries = BTreeMap::new();
            for (bi, block) in design.blocks().iter().enumerate() {
                if block.contains(cache) {
                    for (n, file) in coded.iter().enumerate() {
                        entries.insert((n, bi), file[bi].clone());
                    }
                }
            }
            CacheContents { cache, entries }
        })
        .collect();

    let file_lens = (0..library.len()).map(|n| library.file(n).len()).collect();
    Ok(SchemeInstance {
        hppda,
        feasibility,
        code,
        layout,
        file_lens,
        coded,
        caches,
    })
}

impl SchemeInstance {
    pub fn hppda(&self) -> &GeneralizedHpPda {
        &self.hppda
    }

    pub fn code(&self) -> &MdsCode {
        &self.code
    }

    pub fn layout(&self) -> &FileLayout {
        &self.layout
    }

    pub fn feasibility(&self) -> &Feasibility {
        &self.feasibility
    }

    pub fn num_files(&self) -> usize {
        self.coded.len()
    }

    /// Contents of cache `i` (1-based).
    pub fn cache(&self, i: Point) -> &CacheContents {
        &self.caches[i as usize - 1]
    }

    pub fn caches(&self) -> &[CacheContents] {
        &self.caches
    }

    /// Server-side coded subfile W^c_{n,A}.
    pub fn coded_subfile(&self, file: usize, block: usize) -> &Subfile {
        &self.coded[file][block]
    }

    /// M/N = λ_1 / D.
    pub fn memory_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.hppda.params().z_c, self.code.d() as u64)
    }
}

/// Online set and the demand of every active user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandVector {
    pub online: PointSet,
    pub demands: BTreeMap<PointSet, usize>,
}

impl DemandVector {
    /// Distinct files for every active user, in user order. Needs N ≥ K_o.
    pub fn worst_case(g: &GeneralizedHpPda, online: &PointSet, num_files: usize) -> Result<Self> {
        let users = active_users_checked(g, online)?;
        if num_files < users.len() {
            return Err(Error::InvalidParameter(format!(
                "worst-case demands need N ≥ K_o = {}, library has {num_files}",
                users.len()
            )));
        }
        let demands = users.into_iter().enumerate().map(|(n, u)| (u, n)).collect();
        Ok(DemandVector {
            online: online.clone(),
            demands,
        })
    }

    /// Uniformly random (possibly repeated) demands.
    pub fn random(
        g: &GeneralizedHpPda,
        online: &PointSet,
        num_files: usize,
        seed: u64,
    ) -> Result<Self> {
        let users = active_users_checked(g, online)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let demands = users
            .into_iter()
            .map(|u| (u, rng.gen_range(0..num_files)))
            .collect();
        Ok(DemandVector {
            online: online.clone(),
            demands,
        })
    }

    /// Every active user demands the same file.
    pub fn uniform(g: &GeneralizedHpPda, online: &PointSet, file: usize) -> Result<Self> {
        let users = active_users_checked(g, online)?;
        let demands = users.into_iter().map(|u| (u, file)).collect();
        Ok(DemandVector {
            online: online.clone(),
            demands,
        })
    }

    /// Text form: one `USER FILE` pair per line (`24 3` or `2,4 3`), `#` comments.
    pub fn parse(online: &PointSet, text: &str) -> Result<Self> {
        let mut demands = BTreeMap::new();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (user, file) = line
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("demand line `{line}`")))?;
            let file = file
                .parse()
                .map_err(|_| Error::Parse(format!("bad file index in `{line}`")))?;
            demands.insert(PointSet::parse(user)?, file);
        }
        Ok(DemandVector {
            online: online.clone(),
            demands,
        })
    }

    /// Checks that exactly the active users demand a file in 0..N.
    pub fn validate(&self, g: &GeneralizedHpPda, num_files: usize) -> Result<()> {
        let users = active_users_checked(g, &self.online)?;
        if users.len() != self.demands.len() || !users.iter().all(|u| self.demands.contains_key(u))
        {
            return Err(Error::MalformedDemand(format!(
                "expected demands for the {} users meeting {}, got {}",
                users.len(),
                self.online,
                self.demands.len()
            )));
        }
        if let Some((u, n)) = self.demands.iter().find(|(_, n)| **n >= num_files) {
            return Err(Error::MalformedDemand(format!(
                "user {u} demands file {n} ≥ N = {num_files}"
            )));
        }
        Ok(())
    }
}

fn active_users_checked(g: &GeneralizedHpPda, online: &PointSet) -> Result<Vec<PointSet>> {
    let d = g.design();
    let (users, _) = active_users(d.v(), d.t(), g.r(), online)?;
    Ok(users)
}

/// Users U with U ∩ I ≠ ∅ and their count K_o = Σ_j C(t,j)·C(v−t,r−j).
pub fn active_users(v: u32, t: u32, r: u32, online: &PointSet) -> Result<(Vec<PointSet>, u64)> {
    if online.len() != t as usize || online.points().iter().any(|&p| p == 0 || p > v) {
        return Err(Error::InvalidParameter(format!(
            "online set {online:?} must be a {t}-subset of 1..={v}"
        )));
    }
    let users: Vec<PointSet> = k_subsets(v, r as usize)
        .into_iter()
        .filter(|u| u.intersects(online))
        .collect();
    let k_o = users.len() as u64;
    Ok((users, k_o))
}

/// K_o from the closed form.
pub fn active_user_count(v: u32, t: u32, r: u32) -> u64 {
    let (v, t, r) = (u64::from(v), u64::from(t), u64::from(r));
    (1..=r).map(|j| c(t, j) * c(v - t, r - j)).sum()
}

/// One participant of a multicast: the user and the block it will receive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    pub user: PointSet,
    pub block: PointSet,
    pub block_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    pub j: u32,
    pub label: Label,
    pub participants: Vec<Participant>,
    pub payload: Subfile,
}

/// One realized delivery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliverySession {
    pub demand: DemandVector,
    pub transmissions: Vec<Transmission>,
    /// Users that reach no online cache and are not served.
    pub stranded: Vec<PointSet>,
}

/// Builds every transmission for the demand vector, ordered by j then label.
pub fn deliver(inst: &SchemeInstance, demand: &DemandVector) -> Result<DeliverySession> {
    let g = &inst.hppda;
    demand.validate(g, inst.num_files())?;
    let design = g.design();
    let online = &demand.online;
    let mut transmissions = Vec::new();
    for j in 1..=g.r() {
        let Some(bj) = g.bj(j) else { continue };
        let rows = g.zeta(online, j)?;
        let cols = g.tau(online, j)?;
        for (label, cells) in bj.pda.multicast_groups() {
            let mut payload = Subfile::zeros(inst.layout.symbols_per_subfile);
            let mut participants = Vec::with_capacity(cells.len());
            for (row, col) in cells {
                let block = rows[row].clone();
                let user = cols[col].clone();
                let block_index = design.block_index(&block).expect("ζ selects design blocks");
                let file = demand.demands[&user];
                payload.xor_assign(inst.coded_subfile(file, block_index));
                participants.push(Participant {
                    user,
                    block,
                    block_index,
                });
            }
            transmissions.push(Transmission {
                j,
                label,
                participants,
                payload,
            });
        }
    }
    let stranded = k_subsets(design.v(), g.r() as usize)
        .into_iter()
        .filter(|u| !u.intersects(online))
        .collect();
    Ok(DeliverySession {
        demand: demand.clone(),
        transmissions,
        stranded,
    })
}

/// What one user read, received and reconstructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeTranscript {
    pub user: PointSet,
    /// Number of online caches the user reaches.
    pub j: u32,
    pub demand: usize,
    /// Blocks read from online caches.
    pub cached: Vec<PointSet>,
    /// (transmission index, block) pairs peeled from the broadcast.
    pub delivered: Vec<(usize, PointSet)>,
    pub file: Vec<u8>,
}

impl DecodeTranscript {
    pub fn gathered(&self) -> usize {
        self.cached.len() + self.delivered.len()
    }
}

/// Decodes the demanded file of `user` from its online caches and the session.
pub fn decode_user(
    inst: &SchemeInstance,
    session: &DeliverySession,
    user: &PointSet,
) -> Result<DecodeTranscript> {
    let design = inst.hppda.design();
    let online = &session.demand.online;
    let fail = |reason: String| Error::DecodeFailure {
        online: online.to_string(),
        user: user.to_string(),
        reason,
    };
    let demand = *session
        .demand
        .demands
        .get(user)
        .ok_or_else(|| fail("user is not active for this online set".into()))?;
    let reachable: Vec<&CacheContents> = user
        .intersection(online)
        .points()
        .iter()
        .map(|&p| inst.cache(p))
        .collect();
    let lookup = |file: usize, block: usize| reachable.iter().find_map(|c| c.get(file, block));

    let mut shares: BTreeMap<usize, Subfile> = BTreeMap::new();
    let mut cached = Vec::new();
    for (bi, block) in design.blocks().iter().enumerate() {
        if let Some(sub) = lookup(demand, bi) {
            shares.insert(bi, sub.clone());
            cached.push(block.clone());
        }
    }

    let mut delivered = Vec::new();
    for (ti, tx) in session.transmissions.iter().enumerate() {
        let Some(me) = tx.participants.iter().find(|p| &p.user == user) else {
            continue;
        };
        let mut sub = tx.payload.clone();
        for other in tx.participants.iter().filter(|p| &p.user != user) {
            let file = session.demand.demands[&other.user];
            let known = lookup(file, other.block_index).ok_or_else(|| {
                fail(format!(
                    "transmission {ti}: block {} of file {file} not in online caches",
                    other.block
                ))
            })?;
            sub.xor_assign(known);
        }
        if shares.insert(me.block_index, sub).is_some() {
            return Err(fail(format!(
                "transmission {ti} repeats cached block {}",
                me.block
            )));
        }
        delivered.push((ti, me.block.clone()));
    }

    if shares.len() < inst.code.d() {
        return Err(fail(format!(
            "only {} coded subfiles available, {} needed",
            shares.len(),
            inst.code.d()
        )));
    }
    let message = inst.code.decode(&shares)?;
    let mut file = inst.layout.join(&message)?;
    file.truncate(inst.file_lens[demand]);
    Ok(DecodeTranscript {
        user: user.clone(),
        j: user.intersection(online).len() as u32,
        demand,
        cached,
        delivered,
        file,
    })
}

/// Decodes every active user of the session, in user order.
pub fn decode_all(
    inst: &SchemeInstance,
    session: &DeliverySession,
) -> Result<Vec<DecodeTranscript>> {
    let users: Vec<&PointSet> = session.demand.demands.keys().collect();
    users
        .par_iter()
        .map(|u| decode_user(inst, session, u))
        .collect()
}

/// Exact (M/N, R) of the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatePoint {
    pub memory_ratio: Ratio<u64>,
    pub rate: Ratio<u64>,
    /// Subpacketization D.
    pub subpacketization: u64,
    /// Σ_j S_j.
    pub transmissions: u64,
}

/// (λ_1 / D, Σ_j S_j / D) with D = Z + Σ_s a_{s,r}·C(t−r,s).
pub fn rate(g: &GeneralizedHpPda) -> Result<RatePoint> {
    let design = g.design();
    let (t, r) = (u64::from(design.t()), u64::from(g.r()));
    let mut d = g.params().z;
    for s in 1..=design.t().saturating_sub(g.r()) {
        d += g.a().get(s, g.r()) * c(t - r, u64::from(s));
    }
    let transmissions: u64 = g.params().per_j.iter().map(|p| p.s).sum();
    Ok(RatePoint {
        memory_ratio: Ratio::new(g.params().z_c, d),
        rate: Ratio::new(transmissions, d),
        subpacketization: d,
        transmissions,
    })
}

/// Transmission table: `index,j,label,users,blocks`.
pub fn transmissions_csv(session: &DeliverySession) -> String {
    let mut out = String::from("index,j,label,users,blocks\n");
    for (i, tx) in session.transmissions.iter().enumerate() {
        let users: Vec<String> = tx.participants.iter().map(|p| p.user.to_string()).collect();
        let blocks: Vec<String> = tx
            .participants
            .iter()
            .map(|p| p.block.to_string())
            .collect();
        out.push_str(&format!(
            "{i},{},\"{}\",{},{}\n",
            tx.j,
            tx.label,
            users.join(" "),
            blocks.join(" ")
        ));
    }
    out
}

/// Per-user table: `user,j,demand,cached,delivered,status`.
pub fn users_csv(results: &[(PointSet, std::result::Result<DecodeTranscript, String>)]) -> String {
    let mut out = String::from("user,j,demand,cached,delivered,status\n");
    for (user, res) in results {
        match res {
            Ok(tr) => out.push_str(&format!(
                "{user},{},{},{},{},ok\n",
                tr.j,
                tr.demand,
                tr.cached.len(),
                tr.delivered.len()
            )),
            Err(e) => out.push_str(&format!("{user},,,,,\"fail: {}\"\n", e.replace('"', "'"))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{complete_design, steiner_3_8_4_1};
    use crate::hppda::AMap;

    fn example() -> GeneralizedHpPda {
        let a = AMap::new().with(1, 2, 1).with(1, 1, 2).with(2, 1, 1);
        GeneralizedHpPda::new(steiner_3_8_4_1(), 2, a).unwrap()
    }

    fn set(s: &str) -> PointSet {
        PointSet::parse(s).unwrap()
    }

    #[test]
    fn placement_counts() {
        let lib = Library::random(18, 40, 7).unwrap();
        let inst = place(example(), &lib).unwrap();
        assert_eq!(inst.code().d(), 12);
        assert_eq!(inst.code().n(), 14);
        assert_eq!(inst.memory_ratio(), Ratio::new(7, 12));
        for cache in inst.caches() {
            assert_eq!(cache.entries.len(), 18 * 7);
        }
    }

    #[test]
    fn placement_single_file_small_design() {
        let d = complete_design(3, 2, 2).unwrap();
        let g = GeneralizedHpPda::new(d, 1, AMap::new().with(1, 1, 1)).unwrap();
        let inst = place(g, &Library::random(1, 8, 1).unwrap()).unwrap();
        // λ_1 = 2, F'_1 − Z'_1 = C(1,1) = 1
        assert_eq!(inst.code().d(), 3);
        assert!(inst.caches().iter().all(|c| c.entries.len() == 2));
    }

    #[test]
    fn infeasible_placement_is_rejected() {
        let g = GeneralizedHpPda::new(steiner_3_8_4_1(), 2, AMap::new().with(1, 2, 1)).unwrap();
        assert!(matches!(
            place(g, &Library::random(1, 4, 0).unwrap()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn active_user_examples() {
        assert_eq!(active_users(8, 3, 2, &set("246")).unwrap().1, 18);
        assert_eq!(active_users(8, 3, 1, &set("246")).unwrap().1, 3);
        assert_eq!(active_users(5, 3, 2, &set("135")).unwrap().1, 9);
        assert_eq!(active_user_count(8, 3, 2), 18);
        assert_eq!(active_user_count(5, 3, 2), 9);
        assert!(active_users(8, 3, 2, &set("24")).is_err());
    }

    #[test]
    fn example_delivery_and_decoding() {
        let lib = Library::random(18, 30, 3).unwrap();
        let inst = place(example(), &lib).unwrap();
        let online = set("246");
        let dv = DemandVector::worst_case(inst.hppda(), &online, 18).unwrap();
        let session = deliver(&inst, &dv).unwrap();
        assert_eq!(session.transmissions.len(), 36);
        assert_eq!(session.stranded.len(), 28 - 18);

        let x1 = session.transmissions.iter().find(|t| t.j == 2).unwrap();
        let mut pairs: Vec<(String, String)> = x1
            .participants
            .iter()
            .map(|p| (p.user.to_string(), p.block.to_string()))
            .collect();
        pairs.sort();
        assert_eq!(
            pairs,
            [
                ("24".into(), "1368".into()),
                ("26".into(), "1458".into()),
                ("46".into(), "1278".into())
            ]
        );

        let t24 = decode_user(&inst, &session, &set("24")).unwrap();
        assert_eq!((t24.cached.len(), t24.delivered.len()), (11, 1));
        assert_eq!(t24.file, lib.file(dv.demands[&set("24")]));
        let t12 = decode_user(&inst, &session, &set("12")).unwrap();
        assert_eq!((t12.cached.len(), t12.delivered.len()), (7, 5));
        assert_eq!(t12.file, lib.file(dv.demands[&set("12")]));
        assert!(decode_user(&inst, &session, &set("13")).is_err());
    }

    #[test]
    fn zero_library_decodes_to_zero() {
        let lib = Library::new(vec![vec![0u8; 17]; 18]).unwrap();
        let inst = place(example(), &lib).unwrap();
        let online = set("135");
        let dv = DemandVector::worst_case(inst.hppda(), &online, 18).unwrap();
        let session = deliver(&inst, &dv).unwrap();
        for tr in decode_all(&inst, &session).unwrap() {
            assert_eq!(tr.file, vec![0u8; 17]);
        }
    }

    #[test]
    fn identical_demands_keep_transmission_count() {
        let lib = Library::random(2, 9, 5).unwrap();
        let inst = place(example(), &lib).unwrap();
        let dv = DemandVector::uniform(inst.hppda(), &set("178"), 1).unwrap();
        let session = deliver(&inst, &dv).unwrap();
        assert_eq!(session.transmissions.len(), 36);
        for tr in decode_all(&inst, &session).unwrap() {
            assert_eq!(tr.file, lib.file(1));
        }
    }

    #[test]
    fn malformed_demands() {
        let lib = Library::random(3, 4, 5).unwrap();
        let inst = place(example(), &lib).unwrap();
        let online = set("246");
        let mut dv = DemandVector::uniform(inst.hppda(), &online, 0).unwrap();
        dv.demands.insert(set("24"), 5);
        assert!(matches!(
            deliver(&inst, &dv),
            Err(Error::MalformedDemand(_))
        ));
        dv.demands.remove(&set("24"));
        assert!(matches!(
            deliver(&inst, &dv),
            Err(Error::MalformedDemand(_))
        ));
        assert!(DemandVector::worst_case(inst.hppda(), &online, 3).is_err());
    }

    #[test]
    fn demand_text() {
        let dv = DemandVector::parse(&set("246"), "# u f\n24 3\n1,2 0\n").unwrap();
        assert_eq!(dv.demands[&set("24")], 3);
        assert_eq!(dv.demands[&set("12")], 0);
        assert!(DemandVector::parse(&set("246"), "24").is_err());
    }

    #[test]
    fn rate_examples() {
        let rp = rate(&example()).unwrap();
        assert_eq!(rp.memory_ratio, Ratio::new(7, 12));
        assert_eq!(rp.rate, Ratio::from_integer(3));
        assert_eq!((rp.subpacketization, rp.transmissions), (12, 36));

        // B_2 empty: only B_1 transmits
        let g = GeneralizedHpPda::new(
            steiner_3_8_4_1(),
            2,
            AMap::new().with(1, 1, 2).with(2, 1, 1),
        )
        .unwrap();
        let rp = rate(&g).unwrap();
        assert_eq!(rp.transmissions, 35);
        assert_eq!(rp.subpacketization, 11);
    }

    #[test]
    fn csv_exports() {
        let lib = Library::random(18, 6, 9).unwrap();
        let inst = place(example(), &lib).unwrap();
        let dv = DemandVector::worst_case(inst.hppda(), &set("246"), 18).unwrap();
        let session = deliver(&inst, &dv).unwrap();
        let tx = transmissions_csv(&session);
        assert_eq!(tx.lines().count(), 37);
        let results: Vec<_> = dv
            .demands
            .keys()
            .map(|u| {
                (
                    u.clone(),
                    decode_user(&inst, &session, u).map_err(|e| e.to_string()),
                )
            })
            .collect();
        let users = users_csv(&results);
        assert_eq!(users.lines().count(), 19);
        assert!(users.lines().skip(1).all(|l| l.ends_with(",ok")));
    }

    #[test]
    fn uneven_library_round_trips() {
        let lib = Library::new(vec![b"abc".to_vec(), vec![], (0..=255).collect()]).unwrap();
        let g = GeneralizedHpPda::new(
            complete_design(5, 3, 2).unwrap(),
            1,
            AMap::new().with(1, 1, 2),
        )
        .unwrap();
        let inst = place(g, &lib).unwrap();
        let online = set("25");
        let dv = DemandVector::parse(&online, "2 2\n5 0\n").unwrap();
        let session = deliver(&inst, &dv).unwrap();
        let out = decode_all(&inst, &session).unwrap();
        assert_eq!(out[0].file, lib.file(2));
        assert_eq!(out[1].file, lib.file(0));
    }
}
