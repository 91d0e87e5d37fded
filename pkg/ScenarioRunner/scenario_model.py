"""
场景文件的模型层 - 把 JSON 场景解析为各模块的输入对象

支持的 kind：bundle+kernel / grassmann / cpmap / homogeneous / gns。
复数写作 [re, im]（实数可直接写数值），矩阵为按行嵌套的数组，
核分块的键写作 "(s,t)"。
"""
import json
import os
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from CompletelyPositive.algebra_core import CpMap, MatrixAlgebra
from Grassmannian.grassmann_core import GrassKernelSpec, make_spec
from LikeHermitianBundle.bundle_core import Bundle, BundleMorphism, make_bundle
from LinearAlgebra.linalg_core import orthonormal_basis
from LinearAlgebra.semilinear import SemilinearMap
from ReproducingKernel.kernel_core import Kernel
from ReproducingKernel.kernel_zoo import KERNEL_FAMILIES, family_kernel
from Universality.homogeneous_core import (HomogeneousBundle, SampledHomogeneous, coset_representatives,
                                           finite_group, homogeneous_bundle)
from utils.exceptions import KernelToolkitError, ScenarioError
from utils.logger import LogManager

logger = LogManager.get_logger("SR")

KINDS = ("bundle+kernel", "grassmann", "cpmap", "homogeneous", "gns")
BLOCK_KEY = re.compile(r"^\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)$")


@dataclass
class Scenario:
    """已解析的场景：原始数据 + 构造好的模块对象"""
    scenario_id: str
    kind: str
    tolerance: Optional[float] = None
    suites: List[str] = field(default_factory=list)
    objects: Dict[str, Any] = field(default_factory=dict)
    source: str = ""

    def get(self, name: str) -> Any:
        return self.objects.get(name)


def _fail(location: str, message: str):
    logger.error(f"场景解析失败 {location}: {message}")
    raise ScenarioError(location, message)


def parse_complex(value, location: str) -> complex:
    """数值或 [re, im]"""
    if isinstance(value, bool):
        _fail(location, f"非法的复数: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        return complex(value[0], value[1])
    _fail(location, f"非法的复数: {value!r}，应为数值或 [re, im]")


def parse_vector(value, location: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        _fail(location, "向量应为非空数组")
    return np.array([parse_complex(v, f"{location}[{i}]") for i, v in enumerate(value)], dtype=complex)


def parse_matrix(value, location: str) -> np.ndarray:
    """按行嵌套的数组，每行长度必须一致"""
    if not isinstance(value, list) or not value or not all(isinstance(row, list) for row in value):
        _fail(location, "矩阵应为按行嵌套的非空数组")
    width = len(value[0])
    rows = []
    for i, row in enumerate(value):
        if len(row) != width:
            _fail(f"{location}[{i}]", f"行长度 {len(row)} 与第一行长度 {width} 不符")
        rows.append([parse_complex(v, f"{location}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(rows, dtype=complex)


def parse_columns(value, location: str) -> np.ndarray:
    """向量列表 → 以这些向量为列的矩阵"""
    if not isinstance(value, list) or not value:
        _fail(location, "应为非空的向量列表")
    vectors = [parse_vector(v, f"{location}[{i}]") for i, v in enumerate(value)]
    if len({v.shape[0] for v in vectors}) != 1:
        _fail(location, "向量长度不一致")
    return np.column_stack(vectors)


def _require(data: Dict, key: str, location: str):
    if key not in data:
        _fail(f"{location}.{key}" if location else key, "缺少必需字段")
    return data[key]


def _point_lookup(bundle: Bundle) -> Dict[str, Any]:
    return {str(p): p for p in bundle.points}


def _resolve_point(lookup: Dict[str, Any], name, location: str):
    if str(name) not in lookup:
        _fail(location, f"未知点: {name}")
    return lookup[str(name)]


def _parse_bundle(data: Dict) -> Bundle:
    points = _require(data, "points", "bundle")
    if not isinstance(points, list) or not points or not all(isinstance(p, str) for p in points):
        _fail("bundle.points", "点列应为非空字符串数组")
    dims = _require(data, "fiber_dims", "bundle")
    if isinstance(dims, int):
        dims = {p: dims for p in points}
    if not isinstance(dims, dict):
        _fail("bundle.fiber_dims", "应为整数或 点→整数 的对象")
    for p in points:
        if not isinstance(dims.get(p), int) or dims[p] < 1:
            _fail(f"bundle.fiber_dims.{p}", f"纤维维数应为正整数, 实际为 {dims.get(p)!r}")
    involution = data.get("involution")
    if involution is not None:
        for p in points:
            if p not in involution:
                _fail(f"bundle.involution.{p}", "对合未定义于该点")
            if involution[p] not in points:
                _fail(f"bundle.involution.{p}", f"像 {involution[p]!r} 不在点列中")
    pairings = None
    if "pairings" in data:
        pairings = {}
        for p in points:
            if p not in data["pairings"]:
                _fail(f"bundle.pairings.{p}", "缺少配对矩阵")
            pairings[p] = parse_matrix(data["pairings"][p], f"bundle.pairings.{p}")
    try:
        return make_bundle(points, dims, involution, pairings)
    except KernelToolkitError as e:
        _fail("bundle", str(e))


def _parse_kernel(data: Dict, bundle: Optional[Bundle]) -> Kernel:
    if "family" in data:
        family = data["family"]
        if family not in KERNEL_FAMILIES:
            _fail("kernel.family", f"不支持的核族 {family!r}. 可选值: {list(KERNEL_FAMILIES.keys())}")
        samples = [parse_complex(v, f"kernel.samples[{i}]")
                   for i, v in enumerate(_require(data, "samples", "kernel"))]
        parameters = data.get("parameters", {})
        try:
            return family_kernel(family, samples, **parameters)
        except (TypeError, ValueError) as e:
            _fail("kernel", str(e))
    if bundle is None:
        _fail("bundle", "显式给出分块的核需要 bundle 字段")
    blocks_data = _require(data, "blocks", "kernel")
    if not isinstance(blocks_data, dict):
        _fail("kernel.blocks", "应为 \"(s,t)\" → 矩阵 的对象")
    lookup = _point_lookup(bundle)
    blocks = {}
    for key, value in blocks_data.items():
        location = f"kernel.blocks.{key}"
        match = BLOCK_KEY.match(key)
        if match is None:
            _fail(location, "分块键应写作 \"(s,t)\"")
        s = _resolve_point(lookup, match.group(1), location)
        t = _resolve_point(lookup, match.group(2), location)
        block = parse_matrix(value, location)
        expected = (bundle.dim(s), bundle.dim(t))
        if block.shape != expected:
            _fail(location, f"分块形状 {block.shape} 应为 {expected}")
        blocks[(s, t)] = block
    return Kernel(bundle, blocks)


def _parse_fiber_maps(data: Dict, bundle: Bundle, base_map: Dict, location: str) -> Dict:
    lookup = _point_lookup(bundle)
    maps = {}
    for name in lookup:
        if name not in data:
            _fail(f"{location}.{name}", "缺少纤维映射")
        m = parse_matrix(data[name], f"{location}.{name}")
        p = lookup[name]
        expected = (bundle.dim(base_map[p]), bundle.dim(p))
        if m.shape != expected:
            _fail(f"{location}.{name}", f"纤维映射形状 {m.shape} 应为 {expected}")
        maps[p] = m
    return maps


def _parse_morphism(data: Dict, bundle: Bundle) -> BundleMorphism:
    lookup = _point_lookup(bundle)
    raw = data.get("base_map", {name: name for name in lookup})
    base_map = {}
    for name in lookup:
        if name not in raw:
            _fail(f"morphism.base_map.{name}", "底映射未定义于该点")
        base_map[lookup[name]] = _resolve_point(lookup, raw[name], f"morphism.base_map.{name}")
    fiber_maps = _parse_fiber_maps(_require(data, "fiber_maps", "morphism"), bundle, base_map,
                                   "morphism.fiber_maps")
    try:
        return BundleMorphism(bundle, bundle, base_map, fiber_maps, bool(data.get("antilinear", False)))
    except KernelToolkitError as e:
        _fail("morphism", str(e))


def _parse_conjugation(data: Dict, bundle: Bundle) -> BundleMorphism:
    base_map = {p: bundle.star(p) for p in bundle.points}
    fiber_maps = _parse_fiber_maps(_require(data, "fiber_maps", "conjugation"), bundle, base_map,
                                   "conjugation.fiber_maps")
    try:
        return BundleMorphism(bundle, bundle, base_map, fiber_maps, True)
    except KernelToolkitError as e:
        _fail("conjugation", str(e))


def _parse_omega(data: Dict, bundle: Bundle) -> Tuple[np.ndarray, np.ndarray]:
    """C^n 中生成元的等距像（按点顺序拼接）与 C^n 上的线性对合"""
    vectors = _require(data, "vectors", "omega")
    lookup = _point_lookup(bundle)
    columns = []
    for name, p in lookup.items():
        if name not in vectors:
            _fail(f"omega.vectors.{name}", "缺少该点纤维基的像")
        y = parse_columns(vectors[name], f"omega.vectors.{name}")
        if y.shape[1] != bundle.dim(p):
            _fail(f"omega.vectors.{name}", f"向量个数 {y.shape[1]} 应为纤维维数 {bundle.dim(p)}")
        columns.append(y)
    y = np.hstack(columns)
    c = parse_matrix(_require(data, "matrix", "omega"), "omega.matrix")
    if c.shape != (y.shape[0], y.shape[0]):
        _fail("omega.matrix", f"形状 {c.shape} 应为 {(y.shape[0],) * 2}")
    return y, c


def _parse_involution(data: Dict, n: int, location: str) -> SemilinearMap:
    c = parse_matrix(_require(data, "matrix", location), f"{location}.matrix")
    if c.shape != (n, n):
        _fail(f"{location}.matrix", f"形状 {c.shape} 应为 {(n, n)}")
    return SemilinearMap.of(c, bool(data.get("antilinear", False)))


def _load_bundle_kernel(data: Dict, objects: Dict):
    kernel_data = _require(data, "kernel", "")
    if not isinstance(kernel_data, dict):
        _fail("kernel", "应为对象")
    bundle = _parse_bundle(data["bundle"]) if "bundle" in data else None
    if bundle is not None and "family" in kernel_data:
        _fail("bundle", "核族场景的丛由采样点生成，不能同时给出 bundle")
    kernel = _parse_kernel(kernel_data, bundle)
    bundle = kernel.bundle
    objects["bundle"] = bundle
    objects["kernel"] = kernel
    if "morphism" in data:
        objects["morphism"] = _parse_morphism(data["morphism"], bundle)
    if "conjugation" in data:
        objects["conjugation"] = _parse_conjugation(data["conjugation"], bundle)
    if "omega" in data:
        objects["omega"] = _parse_omega(data["omega"], bundle)


def _load_grassmann(data: Dict, objects: Dict):
    n = _require(data, "ambient_dim", "")
    if not isinstance(n, int) or n < 1:
        _fail("ambient_dim", f"环境维数应为正整数, 实际为 {n!r}")
    subspaces = _require(data, "subspaces", "")
    if not isinstance(subspaces, list) or not subspaces:
        _fail("subspaces", "应为非空数组")
    spanning, labels = [], []
    for i, entry in enumerate(subspaces):
        location = f"subspaces[{i}]"
        vectors = parse_columns(_require(entry, "vectors", location), f"{location}.vectors")
        if vectors.shape[0] != n:
            _fail(f"{location}.vectors", f"向量长度 {vectors.shape[0]} 应为 {n}")
        spanning.append(vectors)
        labels.append(str(entry.get("label", f"S{i}")))
    involution = _parse_involution(data["involution"], n, "involution") if "involution" in data else None
    try:
        objects["spec"] = make_spec(n, spanning, involution, labels)
    except KernelToolkitError as e:
        _fail("subspaces", str(e))


def _parse_algebra(data: Dict, location: str) -> MatrixAlgebra:
    blocks = _require(data, "blocks", location)
    mults = data.get("multiplicities", [])
    if (not isinstance(blocks, list) or not blocks or not all(isinstance(b, int) for b in blocks)
            or not isinstance(mults, list) or not all(isinstance(m, int) for m in mults)):
        _fail(location, "blocks/multiplicities 应为整数数组")
    try:
        return MatrixAlgebra(tuple(blocks), tuple(mults))
    except KernelToolkitError as e:
        _fail(location, str(e))


def _load_cpmap(data: Dict, objects: Dict):
    alg = _parse_algebra(_require(data, "algebra", ""), "algebra")
    objects["algebra"] = alg
    if "kraus" in data:
        if not isinstance(data["kraus"], list) or not data["kraus"]:
            _fail("kraus", "Kraus 算子列表应为非空数组")
        kraus = [parse_matrix(v, f"kraus[{i}]") for i, v in enumerate(data["kraus"])]
        for i, v in enumerate(kraus):
            if v.shape[0] != alg.size or v.shape[1] != kraus[0].shape[1]:
                _fail(f"kraus[{i}]", f"形状 {v.shape} 应为 ({alg.size}, {kraus[0].shape[1]})")
        try:
            objects["phi"] = CpMap.from_kraus(alg, kraus)
        except KernelToolkitError as e:
            _fail("kraus", str(e))
        return
    name = _require(data, "map", "")
    if alg.blocks != (alg.size,):
        _fail("map", "命名映射只定义在全矩阵代数 M_n 上")
    constructors = {"identity": CpMap.identity, "transpose": CpMap.transpose, "trace": CpMap.trace_map}
    if name not in constructors:
        _fail("map", f"不支持的映射 {name!r}. 可选值: {list(constructors.keys())}")
    objects["phi"] = constructors[name](alg.size)


def subalgebra_of(name: str, n: int, location: str) -> Tuple[MatrixAlgebra, Callable[[np.ndarray], np.ndarray]]:
    """命名子代数及其条件期望（都嵌入 M_n）"""
    if name == "diagonal":
        return MatrixAlgebra.diagonal(n), lambda t: np.diag(np.diag(t))
    if name == "scalar":
        return MatrixAlgebra.scalars(n), lambda t: np.trace(t) / n * np.eye(n, dtype=complex)
    if name == "full":
        return MatrixAlgebra.full(n), lambda t: np.asarray(t, dtype=complex)
    _fail(location, f"不支持的子代数 {name!r}. 可选值: ['diagonal', 'scalar', 'full']")


def _parse_group(data: Dict, n: int, location: str) -> List[np.ndarray]:
    generators = [parse_matrix(g, f"{location}[{i}]") for i, g in enumerate(_require(data, location, ""))]
    for i, g in enumerate(generators):
        if g.shape != (n, n):
            _fail(f"{location}[{i}]", f"形状 {g.shape} 应为 {(n, n)}")
    try:
        return finite_group(generators)
    except KernelToolkitError as e:
        _fail(location, str(e))


def _parse_cosets(data: Dict, group: Sequence, test: Callable, n: int) -> List[np.ndarray]:
    cosets = data.get("cosets", "all")
    if cosets == "all":
        return coset_representatives(group, test)
    reps = [parse_matrix(u, f"cosets[{i}]") for i, u in enumerate(cosets)]
    for i, u in enumerate(reps):
        if u.shape != (n, n):
            _fail(f"cosets[{i}]", f"形状 {u.shape} 应为 {(n, n)}")
    return reps


def _load_homogeneous(data: Dict, objects: Dict):
    n = _require(data, "dimension", "")
    if not isinstance(n, int) or n < 1:
        _fail("dimension", f"维数应为正整数, 实际为 {n!r}")
    sub, _ = subalgebra_of(data.get("subgroup", "diagonal"), n, "subgroup")
    hb_vectors = parse_columns(_require(data, "hb_vectors", ""), "hb_vectors")
    if hb_vectors.shape[0] != n:
        _fail("hb_vectors", f"向量长度 {hb_vectors.shape[0]} 应为 {n}")
    group = _parse_group(data, n, "generators")

    def in_subgroup(u) -> bool:
        return sub.contains(u)

    h = SampledHomogeneous(lambda u: u, in_subgroup, orthonormal_basis(hb_vectors).basis)
    reps = _parse_cosets(data, group, in_subgroup, n)
    try:
        hb = homogeneous_bundle(h, reps)
    except KernelToolkitError as e:
        _fail("cosets", str(e))
    objects["group"] = group
    objects["homogeneous"] = hb


def _load_gns(data: Dict, objects: Dict):
    alg = _parse_algebra(_require(data, "algebra", ""), "algebra")
    state = data.get("state", "trace")
    if state == "trace":
        rho = np.eye(alg.size, dtype=complex) / alg.size
    else:
        rho = parse_matrix(state, "state")
        if rho.shape != (alg.size, alg.size):
            _fail("state", f"密度矩阵形状 {rho.shape} 应为 {(alg.size,) * 2}")
    sub, expectation = subalgebra_of(data.get("subalgebra", "diagonal"), alg.size, "subalgebra")
    objects["algebra"] = alg
    objects["phi"] = CpMap.state_from_density(alg, rho)
    objects["subalgebra"] = sub
    objects["expectation"] = expectation
    objects["group"] = _parse_group(data, alg.size, "group_generators")
    if "cosets" in data and data["cosets"] != "all":
        objects["cosets"] = _parse_cosets(data, objects["group"], sub.contains, alg.size)


LOADERS: Dict[str, Callable[[Dict, Dict], None]] = {
    "bundle+kernel": _load_bundle_kernel,
    "grassmann": _load_grassmann,
    "cpmap": _load_cpmap,
    "homogeneous": _load_homogeneous,
    "gns": _load_gns,
}


def scenario_from_dict(data: Dict, scenario_id: str = "scenario", source: str = "") -> Scenario:
    """
    由已解码的 JSON 对象构造场景

    Raises:
        ScenarioError: 字段缺失、复数格式非法或维数不符，location 指出出错字段
    """
    if not isinstance(data, dict):
        _fail("<root>", "场景顶层应为对象")
    kind = _require(data, "kind", "")
    if kind not in KINDS:
        _fail("kind", f"不支持的场景类型 {kind!r}. 可选值: {list(KINDS)}")
    tolerance = data.get("tolerance")
    if tolerance is not None and (isinstance(tolerance, bool) or not isinstance(tolerance, (int, float))
                                  or tolerance <= 0):
        _fail("tolerance", f"容差应为正数, 实际为 {tolerance!r}")
    suites = data.get("suites", [])
    if not isinstance(suites, list) or not all(isinstance(s, str) for s in suites):
        _fail("suites", "应为字符串数组")
    objects: Dict[str, Any] = {}
    try:
        LOADERS[kind](data, objects)
    except ScenarioError:
        raise
    except KernelToolkitError as e:
        # 构造函数中的校验失败同样是输入错误
        _fail(kind, str(e))
    logger.debug(f"场景 {scenario_id} ({kind}) 解析完成: {sorted(objects.keys())}")
    return Scenario(scenario_id, kind, None if tolerance is None else float(tolerance),
                    list(suites), objects, source)


def load_scenario(path: str) -> Scenario:
    """
    读取场景文件

    Args:
        path: UTF-8 编码的 JSON 文件

    Returns:
        Scenario，scenario_id 为文件名（不含扩展名）

    Raises:
        ScenarioError: 文件不存在、JSON 语法错误（含行列号）或内容非法
    """
    if not os.path.isfile(path):
        _fail(path, "场景文件不存在")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        _fail(f"{path}:{e.lineno}:{e.colno}", f"JSON 语法错误: {e.msg}")
    except UnicodeDecodeError as e:
        _fail(path, f"不是 UTF-8 编码的文本: 第 {e.start} 字节")
    except OSError as e:
        _fail(path, f"无法读取: {e}")
    scenario_id = os.path.splitext(os.path.basename(path))[0]
    return scenario_from_dict(data, scenario_id, path)
