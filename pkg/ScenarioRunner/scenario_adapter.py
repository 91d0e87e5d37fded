"""
场景适配器 - 连接场景模型与各数学模块

每个套件（positivity / rkhs / pullback / universality / stinespring / gns / tracial / property）
按场景类型分派到具体检查，结果汇总为 CheckRecord 列表。
套件内抛出的 PreconditionError 与其他工具包异常转为失败项，不中断运行。
"""
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from CompletelyPositive.algebra_core import CpMap, amplification_check, choi_matrix, random_unital_cp
from CompletelyPositive.stinespring_core import (compression_factorization, dilation_identity_check, gns,
                                                 stinespring, two_squares)
from Grassmannian.grassmann_core import (compression_expectation_residual, involutive_identity_residual,
                                         involutive_kernel, tautological_transfer, universal_kernel)
from LikeHermitianBundle.bundle_core import identity_morphism, is_adjointable, validate_bundle
from LikeHermitianBundle.bundle_samples import random_bundle
from LinearAlgebra.linalg_core import max_abs, psd_check
from LinearAlgebra.semilinear import SemilinearMap
from ReproducingKernel.kernel_core import (Kernel, check_positive, diagonal_positivity, exchange_residual,
                                           kernel_difference, max_block_norm)
from ReproducingKernel.kernel_zoo import random_morphism, random_positive_kernel
from ReproducingKernel.pullback_core import (functor_residual, hom_bound, induced_operator, pullback,
                                             pullback_characterization)
from ReproducingKernel.rkhs_core import build_rkhs, inner_product_residual, reproducing_residual
from ReproducingKernel.symmetry_core import conjugation, equivariance_check
from ScenarioRunner.report_core import CheckRecord, Report
from ScenarioRunner.scenario_model import Scenario
from Universality.homogeneous_core import complexified_universality, group_action, orbit_compare
from Universality.tracial_gns_core import tracial_gns_suite
from Universality.universality_core import (canonical_transfer, diagonal_identity_residual,
                                            invertibility_and_rank, transfer_kernel, transport_operator,
                                            verify_universal_hermitian, verify_universal_involutive)
from utils.config_manager import ConfigManager, resolve_tol
from utils.exceptions import KernelToolkitError, PreconditionError, ScenarioError
from utils.logger import LogManager

SUITES = ("positivity", "rkhs", "pullback", "universality", "stinespring", "gns", "tracial", "property")

# 套件 → 适用的场景类型（property 与场景内容无关）
APPLICABLE: Dict[str, Sequence[str]] = {
    "positivity": ("bundle+kernel", "grassmann", "homogeneous", "cpmap", "gns"),
    "rkhs": ("bundle+kernel", "grassmann", "homogeneous"),
    "pullback": ("bundle+kernel",),
    "universality": ("bundle+kernel", "grassmann", "homogeneous"),
    "stinespring": ("cpmap", "gns", "grassmann"),
    "gns": ("gns", "cpmap"),
    "tracial": ("gns",),
    "property": ("bundle+kernel", "grassmann", "cpmap", "homogeneous", "gns"),
}


def applicable_suites(kind: str, include_property: bool = False) -> List[str]:
    return [s for s in SUITES if kind in APPLICABLE[s] and (include_property or s != "property")]


def scenario_suites(scenario: Scenario) -> List[str]:
    """场景实际可运行的套件；cpmap 场景只有余域为 M_1（即态）时才运行 gns"""
    suites = applicable_suites(scenario.kind)
    phi = scenario.get("phi")
    if scenario.kind == "cpmap" and (phi is None or phi.codomain_dim != 1):
        suites.remove("gns")
    return suites


class ScenarioAdapter:
    """场景适配器类，按套件运行检查并生成报告"""

    def __init__(self, scenario: Scenario, tol: Optional[float] = None, seed: Optional[int] = None,
                 max_workers: Optional[int] = None):
        """
        初始化场景适配器

        Args:
            scenario: 已解析的场景
            tol: 相对容差，优先于场景文件中的 tolerance
            seed: 随机套件的种子，默认取 runner_config.seed
            max_workers: 线程池大小，默认取 property_config.max_workers
        """
        self.logger = LogManager.get_logger("SR")
        self.scenario = scenario
        self.tol = tol if tol is not None else scenario.tolerance
        config = ConfigManager.instance()
        runner = config.get_section("runner_config")
        self.property_config = config.get_section("property_config")
        self.cp_config = config.get_section("cp_config")
        self.seed = int(seed if seed is not None else runner.get("seed", 0))
        self.max_workers = int(max_workers or self.property_config.get("max_workers", 4))
        self._handlers: Dict[str, Callable[[], List[CheckRecord]]] = {
            "positivity": self._positivity,
            "rkhs": self._rkhs,
            "pullback": self._pullback,
            "universality": self._universality,
            "stinespring": self._stinespring,
            "gns": self._gns,
            "tracial": self._tracial,
            "property": self._property,
        }

    # ------------------------------------------------------------------ 工具

    def _named(self, name: str) -> float:
        """命名容差；场景或命令行给出相对容差时不影响其他命名容差"""
        if name == "relative":
            return resolve_tol(self.tol)
        return resolve_tol(None, name)

    def _rng(self, *salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, *salt])

    @staticmethod
    def _record(suite: str, name: str, residual: Optional[float], bound: float,
                details: str = "") -> CheckRecord:
        passed = residual is not None and np.isfinite(residual) and residual <= bound
        return CheckRecord(suite, name, bool(passed), residual, details)

    def _kernel_for(self, suite: str) -> Kernel:
        """bundle+kernel / grassmann / homogeneous 场景的主核"""
        kind = self.scenario.kind
        if kind == "bundle+kernel":
            return self.scenario.get("kernel")
        if kind == "grassmann":
            return universal_kernel(self.scenario.get("spec"))
        if kind == "homogeneous":
            return self.scenario.get("homogeneous").kernel()
        raise ScenarioError("suite", f"{suite} 套件不适用于 {kind} 场景")

    def _kernel_checks(self, suite: str, k: Kernel, prefix: str = "") -> List[CheckRecord]:
        """丛公理、正定性、交换恒等式与对角块正性"""
        tol = self.tol
        scale = max(1.0, max_block_norm(k))
        records = []
        bundle_report = validate_bundle(k.bundle, tol)
        kinds = sorted({v.kind for v in bundle_report.violations})
        records.append(CheckRecord(suite, f"{prefix}bundle_axioms", bundle_report.valid,
                                   bundle_report.max_residual, "违例: " + ", ".join(kinds) if kinds else ""))
        pos = check_positive(k, tol)
        records.append(CheckRecord(suite, f"{prefix}positive", pos.positive, max(0.0, -pos.min_eigenvalue),
                                   f"λ_min={pos.min_eigenvalue:.6g}"))
        if bundle_report.valid:
            records.append(self._record(suite, f"{prefix}exchange", exchange_residual(k),
                                        self._named("exchange") * scale))
        diag = diagonal_positivity(k, tol)
        worst = min(diag.values())
        records.append(self._record(suite, f"{prefix}diagonal_positive", max(0.0, -worst),
                                    resolve_tol(tol) * scale, f"min λ={worst:.6g}"))
        return records

    # ------------------------------------------------------------------ 套件

    def _positivity(self) -> List[CheckRecord]:
        kind = self.scenario.kind
        suite = "positivity"
        if kind in ("cpmap", "gns"):
            phi: CpMap = self.scenario.get("phi")
            choi = psd_check(choi_matrix(phi), self.tol)
            records = [
                CheckRecord(suite, "completely_positive", choi.is_psd, max(0.0, -choi.min_eigenvalue),
                            f"Choi λ_min={choi.min_eigenvalue:.6g}"),
                self._record(suite, "hermitian_preserving", phi.hermitian_residual(), self._named("relative")),
            ]
            samples = int(self.cp_config.get("amplification_samples", 20))
            for n in range(2, int(self.cp_config.get("max_amplification", 3)) + 1):
                amp = amplification_check(phi, n, samples, self._rng(n), self.tol)
                records.append(CheckRecord(suite, f"amplification_{n}", amp.positive, max(0.0, -amp.min_eigenvalue),
                                           f"{amp.samples} 个样本, λ_min={amp.min_eigenvalue:.6g}"))
            return records
        records = self._kernel_checks(suite, self._kernel_for(suite))
        if kind == "grassmann":
            spec = self.scenario.get("spec")
            q = universal_kernel(spec)
            records.append(self._record(suite, "Q_diagonal_identity", diagonal_identity_residual(q),
                                        self._named("structural")))
            if spec.involution is not None:
                records.extend(self._kernel_checks(suite, involutive_kernel(spec, self.tol), "involutive."))
        return records

    def _rkhs(self) -> List[CheckRecord]:
        suite = "rkhs"
        k = self._kernel_for(suite)
        scale = max(1.0, max_block_norm(k))
        r = build_rkhs(k, self.tol)
        ranks = invertibility_and_rank(k, self.tol)
        deficient = [f"{s}:{p.rank}/{p.fiber_dim}" for s, p in ranks.items() if p.rank < p.fiber_dim]
        _, transfer_res = canonical_transfer(k, self.tol)
        return [
            CheckRecord(suite, "dimension", True, None, f"dim H^K={r.dim}, 生成元 {len(r.generators)} 个"),
            self._record(suite, "reproducing", reproducing_residual(r), self._named("relative") * scale),
            self._record(suite, "inner_product", inner_product_residual(r), self._named("relative")),
            self._record(suite, "canonical_transfer", transfer_res, self._named("structural") * scale),
            CheckRecord(suite, "evaluation_rank", True, None,
                        "秩亏: " + ", ".join(deficient) if deficient else "所有点处 K̂ 单射"),
        ]

    def _pullback(self) -> List[CheckRecord]:
        suite = "pullback"
        k = self._kernel_for(suite)
        m = self.scenario.get("morphism") or identity_morphism(k.bundle)
        scale = max(1.0, max_block_norm(k))
        records = []
        pulled = check_positive(pullback(m, k), self.tol)
        records.append(CheckRecord(suite, "pullback_positive", pulled.positive, max(0.0, -pulled.min_eigenvalue),
                                   f"λ_min={pulled.min_eigenvalue:.6g}"))
        ch = pullback_characterization(m, k, k, self.tol)
        details = f"equal={ch.equal}, isometry={ch.isometry}, morphism={ch.is_morphism}, M={ch.least_M:.6g}"
        if ch.square_residual is not None:
            details += f", square={ch.square_residual:.3e}"
        records.append(CheckRecord(suite, "characterization", ch.consistent, ch.residual, details))
        bound = hom_bound(m, k, k, self.tol)
        records.append(CheckRecord(suite, "hom_bound", bound.is_morphism, bound.null_residual,
                                   f"M={bound.least_M:.6g}"))
        if bound.is_morphism:
            r = build_rkhs(k, self.tol)
            op = induced_operator(m, r, r, self.tol)
            norms = op.norm_report(self.tol)
            records.append(self._record(suite, "induced_norm", norms["norm_squared_residual"],
                                        self._named("relative") * max(1.0, bound.least_M),
                                        f"‖H‖={norms['norm']:.6g}, ‖H‖≤M: {norms['within_M']}"))
            records.append(self._record(suite, "functor", functor_residual(m, m, r, r, r, self.tol),
                                        self._named("functor") * max(1.0, norms["norm"]) ** 2))
        adj = is_adjointable(m, self.tol)
        records.append(CheckRecord(suite, "adjointable", True, None,
                                   f"bijective={adj.bijective}, isometry={adj.isometry}, "
                                   f"inverse_residual={adj.inverse_residual:.3e}"))
        tau = self.scenario.get("conjugation")
        if tau is not None:
            result = conjugation(k, tau, tol=self.tol)
            if not result.exists:
                records.append(CheckRecord(suite, "conjugation", False, result.symmetry_residual, result.reason))
            else:
                iso = self._named("isometry")
                records.append(self._record(suite, "conjugation_involution",
                                            result.checks["operator_involution"], iso))
                records.append(self._record(suite, "conjugation_antiunitary", result.checks["antiunitary"], iso))
                records.append(self._record(suite, "conjugation_evaluation", result.checks["evaluation"],
                                            self._named("relative") * scale))
        return records

    def _universality_report(self, suite: str, prefix: str, report) -> List[CheckRecord]:
        if report.passed is None:
            return [CheckRecord(suite, f"{prefix}hypothesis", False, None, f"假设不成立: {report.reason}")]
        records = [CheckRecord(suite, f"{prefix}pullback", bool(report.passed), report.residual,
                               f"worst={report.worst_block}")]
        for name, value in report.checks.items():
            if name != "pullback":
                records.append(CheckRecord(suite, f"{prefix}{name}", True, value))
        return records

    def _universality(self) -> List[CheckRecord]:
        suite = "universality"
        kind = self.scenario.kind
        k = self._kernel_for(suite)
        records: List[CheckRecord] = []
        if kind == "bundle+kernel":
            omega = self.scenario.get("omega")
            # 非 Hermite 丛且没有 omega 时由 PreconditionError("hermitian_bundle") 记为失败项
            if omega is None or k.bundle.is_hermitian(self.tol):
                records.extend(self._universality_report(suite, "", verify_universal_hermitian(k, self.tol)))
            if omega is not None:
                r = build_rkhs(k, self.tol)
                c = transport_operator(r, omega[0], omega[1])
                report = verify_universal_involutive(k, SemilinearMap.of(c), self.tol)
                records.extend(self._universality_report(suite, "involutive.", report))
            return records

        if kind == "grassmann":
            spec = self.scenario.get("spec")
            records.extend(self._universality_report(suite, "", verify_universal_hermitian(k, self.tol)))
            k_r = transfer_kernel(tautological_transfer(spec), k.bundle, self.tol)
            res, _ = kernel_difference(k_r, k)
            records.append(self._record(suite, "transfer_kernel", res, self._named("structural")))
            records.append(self._record(suite, "transfer_diagonal", diagonal_identity_residual(k_r),
                                        self._named("isometry")))
            if spec.involution is not None:
                records.append(self._record(suite, "involutive_identity",
                                            involutive_identity_residual(spec, self.tol),
                                            self._named("structural")))
            return records

        hb = self.scenario.get("homogeneous")
        group = self.scenario.get("group")
        scale = max(1.0, max_block_norm(k))
        res, _ = kernel_difference(k, hb.transfer_kernel(self.tol))
        records.append(self._record(suite, "homogeneous_vs_transfer", res, self._named("structural") * scale))
        records.append(self._record(suite, "transfer_diagonal", diagonal_identity_residual(k),
                                    self._named("isometry")))
        actions = group_action(hb, group, self.tol)
        eq = equivariance_check(k, actions, self.tol)
        records.append(CheckRecord(suite, "equivariance", eq.passed, eq.residual, f"worst={eq.worst}"))
        s0 = hb.locate(np.eye(group[0].shape[0]))
        if s0 is None:
            raise ScenarioError("cosets", "陪集列表不含单位元所在的陪集")
        report = complexified_universality(k, actions, s0, self.tol)
        records.extend(self._universality_report(suite, "complexified.", report))
        orbit = orbit_compare(hb.bundle, actions, {i: u for i, u in enumerate(group)}, hb.transfer(), s0, self.tol)
        records.append(CheckRecord(suite, "orbit_compare", orbit.passed, orbit.checks.get("pullback"),
                                   f"轨道 {len(orbit.orbit)} 个点"))
        return records

    def _stinespring_records(self, suite: str, phi: CpMap, prefix: str = "") -> List[CheckRecord]:
        data = stinespring(phi, self.tol)
        scale = max(1.0, phi.domain.size)
        dil, iso, struct = self._named("dilation"), self._named("isometry"), self._named("structural") * scale
        bounds = {"isometry": iso, "dilation": dil, "choi": dil, "multiplicative": struct,
                  "adjoint": struct, "unit": struct}
        records = [CheckRecord(suite, f"{prefix}space_dim", True, None, f"dim K₀={data.space_dim}")]
        for name, value in data.residuals.items():
            records.append(self._record(suite, f"{prefix}{name}", value, bounds[name]))
        return records

    def _stinespring(self) -> List[CheckRecord]:
        suite = "stinespring"
        if self.scenario.kind == "grassmann":
            spec = self.scenario.get("spec")
            records = []
            for label, sub in zip(spec.labels, spec.points):
                checks = dilation_identity_check(sub, self.tol)
                worst = max(v for key, v in checks.items() if key != "space_dim")
                records.append(self._record(suite, f"{label}.identity_dilation", worst, self._named("dilation"),
                                            f"dim K₀={int(checks['space_dim'])}"))
                records.append(self._record(suite, f"{label}.compression_expectation",
                                            compression_expectation_residual(sub, sub, self.tol),
                                            self._named("structural")))
            return records
        phi: CpMap = self.scenario.get("phi")
        records = self._stinespring_records(suite, phi)
        fact = compression_factorization(phi, self.tol)
        records.append(CheckRecord(suite, "compression_factorization", fact.passed, fact.residual,
                                   f"M={fact.least_M:.6g}, equality={fact.equality_residual:.3e}, "
                                   f"dim V(H₀)={fact.compression_dim}"))
        return records

    def _gns(self) -> List[CheckRecord]:
        suite = "gns"
        phi: CpMap = self.scenario.get("phi")
        data = gns(phi, self.tol)
        records = self._stinespring_records(suite, phi)
        vectors = np.column_stack([data.natural_map(a) for a in phi.domain.basis])
        rank_tol = self._named("relative") * max(1.0, max_abs(vectors))
        cyclic = data.space_dim - int(np.linalg.matrix_rank(vectors, tol=rank_tol))
        records.append(CheckRecord(suite, "cyclic", cyclic == 0, float(cyclic), "[a] 张成 H_φ"))
        if self.scenario.kind == "gns":
            report = two_squares(self.scenario.get("expectation"), self.scenario.get("subalgebra"), phi,
                                 self.tol, self._rng(0))
            for name, value in report.checks.items():
                records.append(self._record(suite, f"two_squares.{name}", value,
                                            resolve_tol(self.tol) * max(1.0, phi.domain.size)))
            records.append(CheckRecord(suite, "two_squares.dims", True, None,
                                       f"dim H_A={report.dims['H_A']}, dim H_B={report.dims['H_B']}"))
        return records

    def _tracial(self) -> List[CheckRecord]:
        suite = "tracial"
        s = self.scenario
        report = tracial_gns_suite(s.get("algebra"), s.get("subalgebra"), s.get("expectation"), s.get("phi"),
                                   s.get("group"), s.get("cosets"), self.tol, self._rng(0))
        scale = max(1.0, max(max_block_norm(k) for k in report.kernels.values()))
        bounds = {"tracial": resolve_tol(self.tol), "tau_involution": self._named("isometry"),
                  "tau_antiunitary": self._named("isometry")}
        records = []
        for name, value in report.checks.items():
            records.append(self._record(suite, name, value, bounds.get(name, self._named("universality") * scale)))
        records.append(CheckRecord(suite, "dims", True, None,
                                   ", ".join(f"{k}={v}" for k, v in report.dims.items())))
        return records

    # ------------------------------------------------------------------ 随机性质

    def _universality_instance(self, i: int) -> Dict[str, float]:
        cfg = self.property_config
        rng = self._rng(1, i)
        n_points = int(rng.integers(1, int(cfg["max_points"]) + 1))
        bundle = random_bundle(rng, n_points, int(cfg["max_fiber_dim"]))
        k = random_positive_kernel(rng, bundle)
        scale = max(1.0, max_block_norm(k))
        report = verify_universal_hermitian(k, self.tol)
        source = random_bundle(rng, int(rng.integers(1, int(cfg["max_points"]) + 1)),
                               int(cfg["max_fiber_dim"]), prefix="q")
        pulled = pullback(random_morphism(rng, source, bundle, bool(rng.random() < 0.5)), k)
        return {
            "universality": report.residual / scale,
            "universality_failed": 0.0 if report.passed else 1.0,
            "exchange": exchange_residual(k) / scale,
            "pullback_positive": max(0.0, -check_positive(pulled, self.tol).min_eigenvalue)
                                 / max(1.0, max_block_norm(pulled)),
        }

    def _functor_instance(self, i: int) -> float:
        cfg = self.property_config
        rng = self._rng(2, i)
        bundles = [random_bundle(rng, int(rng.integers(1, int(cfg["max_points"]) + 1)),
                                 int(cfg["max_fiber_dim"]), prefix=f"b{j}_") for j in range(3)]
        rkhs = [build_rkhs(random_positive_kernel(rng, b), self.tol) for b in bundles]
        m2 = random_morphism(rng, bundles[0], bundles[1])
        m1 = random_morphism(rng, bundles[1], bundles[2], bool(rng.random() < 0.5))
        res = functor_residual(m1, m2, rkhs[0], rkhs[1], rkhs[2], self.tol)
        h1 = induced_operator(m1, rkhs[1], rkhs[2], self.tol)
        h2 = induced_operator(m2, rkhs[0], rkhs[1], self.tol)
        norm = h1.norm * h2.norm
        return res / max(1.0, norm)

    def _kraus_instance(self, i: int) -> Dict[str, float]:
        rng = self._rng(3, i)
        n = int(rng.integers(2, 4))
        phi = random_unital_cp(rng, n, int(rng.integers(1, int(self.cp_config["max_kraus"]) + 1)))
        data = stinespring(phi, self.tol)
        fact = compression_factorization(phi, self.tol)
        return {
            "dilation": data.residuals["dilation"],
            "isometry": data.residuals["isometry"],
            "choi": data.residuals["choi"],
            "factorization": fact.residual,
            "factorization_failed": 0.0 if fact.passed else 1.0,
        }

    def _property(self) -> List[CheckRecord]:
        suite = "property"
        instances = int(self.property_config["instances"])
        pairs = int(self.property_config["morphism_pairs"])
        maps = int(self.cp_config["random_kraus_maps"])
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            uni = list(executor.map(self._universality_instance, range(instances)))
            funct = list(executor.map(self._functor_instance, range(pairs)))
            kraus = list(executor.map(self._kraus_instance, range(maps)))
        self.logger.debug(f"随机性质: {instances} 个核, {pairs} 对态射, {maps} 个 CP 映射")

        def worst(rows, key):
            return max((row[key] for row in rows), default=0.0)

        seed_note = f"seed={self.seed}"
        uni_failed = int(sum(row["universality_failed"] for row in uni))
        fact_failed = int(sum(row["factorization_failed"] for row in kraus))
        dil = self._named("dilation")
        return [
            CheckRecord(suite, "universality", uni_failed == 0
                        and worst(uni, "universality") <= self._named("universality"),
                        worst(uni, "universality"), f"{instances} 个实例, 失败 {uni_failed}, {seed_note}"),
            self._record(suite, "exchange", worst(uni, "exchange"), self._named("exchange"), seed_note),
            self._record(suite, "pullback_positive", worst(uni, "pullback_positive"),
                         resolve_tol(self.tol), seed_note),
            self._record(suite, "functor", max(funct, default=0.0), self._named("functor"),
                         f"{pairs} 对可复合态射, {seed_note}"),
            self._record(suite, "stinespring_dilation", worst(kraus, "dilation"), dil,
                         f"{maps} 个随机 Kraus 映射, {seed_note}"),
            self._record(suite, "stinespring_isometry", worst(kraus, "isometry"), self._named("isometry"), seed_note),
            self._record(suite, "stinespring_choi", worst(kraus, "choi"), dil, seed_note),
            CheckRecord(suite, "compression_factorization", fact_failed == 0
                        and worst(kraus, "factorization") <= dil, worst(kraus, "factorization"),
                        f"失败 {fact_failed}, {seed_note}"),
        ]

    # ------------------------------------------------------------------ 入口

    def check_suite(self, suite: str):
        """
        检查套件名称与适用性

        Raises:
            ScenarioError: 未知套件或不适用于当前场景类型
        """
        if suite not in SUITES:
            self.logger.error(f"未知套件: {suite}")
            raise ScenarioError("suite", f"未知套件 {suite!r}. 可选值: {list(SUITES)}")
        if self.scenario.kind not in APPLICABLE[suite]:
            self.logger.error(f"套件 {suite} 不适用于 {self.scenario.kind} 场景")
            raise ScenarioError("suite", f"套件 {suite!r} 不适用于 {self.scenario.kind} 场景")

    def run_suite(self, suite: str) -> List[CheckRecord]:
        """运行单个套件；数学前置条件失败记为失败项"""
        self.check_suite(suite)
        self.logger.info(f"运行套件 {suite} ({self.scenario.scenario_id})")
        try:
            return self._handlers[suite]()
        except ScenarioError:
            raise
        except PreconditionError as e:
            self.logger.warning(f"套件 {suite} 前置条件不成立: {e.check}")
            return [CheckRecord(suite, "precondition", False, e.residual, f"precondition: {e.check} - {e}")]
        except (KernelToolkitError, np.linalg.LinAlgError) as e:
            self.logger.warning(f"套件 {suite} 执行失败: {e}")
            return [CheckRecord(suite, "error", False, None, f"{type(e).__name__}: {e}")]

    def _timed(self, suite: str):
        start = time.perf_counter()
        records = self.run_suite(suite)
        return records, time.perf_counter() - start

    def run(self, suites: Optional[Sequence[str]] = None) -> Report:
        """
        运行一组套件并汇总报告

        Args:
            suites: 套件名列表，省略时为场景的 suites 字段或全部适用套件

        Returns:
            Report，检查项按套件顺序排列
        """
        suites = list(suites or self.scenario.suites or scenario_suites(self.scenario))
        for suite in suites:
            self.check_suite(suite)
        # property 套件自带线程池，其余套件并行执行
        parallel = [s for s in suites if s != "property"]
        results: Dict[str, tuple] = {}
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            for suite, result in zip(parallel, executor.map(self._timed, parallel)):
                results[suite] = result
        if "property" in suites:
            results["property"] = self._timed("property")

        report = Report(self.scenario.scenario_id, self.scenario.kind)
        for suite in suites:
            records, seconds = results[suite]
            report.checks.extend(records)
            report.timing[suite] = seconds
        return report


def run_suite(scenario: Scenario, suite: str, tol: Optional[float] = None,
              seed: Optional[int] = None) -> Report:
    """运行单个套件并返回报告"""
    return ScenarioAdapter(scenario, tol, seed).run([suite])


def run_scenario(scenario: Scenario, suites: Optional[Sequence[str]] = None, tol: Optional[float] = None,
                 seed: Optional[int] = None) -> Report:
    return ScenarioAdapter(scenario, tol, seed).run(suites)
