# coding=utf-8
# Copyright 2025 The Google Research Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import logging
import time

import fire

from detold.cubic import detold_min_cubic, extremal_scan, greedy_density_bound, is_detold_cubic
from detold.errors import CapabilityError, CertificationError, InputError, NoSolutionError
from detold.grids import pattern_density, search_pattern, torus_graph, verify_pattern
from detold.reduction import assignment_to_set, build_instance, set_to_assignment
from detold.solver import solve as solve_level
from detold.verify import Level, check
from evaluate import run_sweeps
from utils.cnf import parse_cnf
from utils.graph_io import dump_role_map, load_corpus, parse_graph, parse_vertex_set, write_graph
from utils.patterns import dump_pattern, load_pattern
from utils.report import RunReport, emit, save_run

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_NOT_FOUND, EXIT_INPUT, EXIT_CAPABILITY = 0, 1, 2, 3


def _execute(command, config, body):
    """
    运行一个子命令：计时、捕获异常并映射为退出码、打印报告、按需写入 log_dir

    参数:
        command (str): 子命令名称
        config (dict): 子命令的全部参数（即其配置）
        body (callable): body(report) -> (results, exit_code)
    """
    logging.basicConfig(level=logging.DEBUG if config.get('verbose') else logging.WARNING,
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')
    report = RunReport(command, args={k: v for k, v in config.items() if k != 'verbose'},
                       workers=config.get('workers', 1))
    start = time.time()
    try:
        if config.get('format', 'json') not in ('json', 'tsv'):
            fmt = config.pop('format')
            raise InputError(f'Unknown format {fmt!r}; expected json or tsv')
        results, code = body(report)
    except InputError as e:
        logger.error('%s: %s', command, e)
        results, code = {'error': 'input', 'message': str(e)}, EXIT_INPUT
    except CapabilityError as e:
        logger.error('%s: %s', command, e)
        results, code = {'error': 'capability', 'message': str(e)}, EXIT_CAPABILITY
    except NoSolutionError as e:
        results, code = {'feasible': False, 'message': str(e)}, EXIT_NOT_FOUND
    except CertificationError as e:
        results, code = {'certified': False, 'message': str(e)}, EXIT_NOT_FOUND
    report.results = results
    report.wall_time = time.time() - start
    print(emit(report, config.get('format', 'json')), end='')
    save_run(config.get('log_dir'), config, report)
    raise SystemExit(code)


def _verdict_dict(verdict):
    return {'ok': verdict.ok, 'failures': verdict.failures}


########## verify / solve ##########

def verify(graph, set, level='det-old', shortcut=True, format='json', log_dir=None, verbose=False):
    """检查 --set 是否为 --graph 上给定层级的检测集"""
    config = dict(locals())

    def body(report):
        report.add_input('graph', graph)
        g = parse_graph(graph)
        s = parse_vertex_set(set, g.n)
        verdict = check(g, s, Level.parse(level), shortcut=shortcut)
        return _verdict_dict(verdict), EXIT_OK if verdict.ok else EXIT_NOT_FOUND

    _execute('verify', config, body)


def solve(graph, level='det-old', oracle=False, format='json', log_dir=None, verbose=False):
    """求最小检测集；不存在时退出码为 1"""
    config = dict(locals())

    def body(report):
        report.add_input('graph', graph)
        result = solve_level(parse_graph(graph), Level.parse(level), oracle=oracle)
        return result, EXIT_OK if result.feasible else EXIT_NOT_FOUND

    _execute('solve', config, body)


########## cubic ##########

def cubic_scan(corpus, n=None, workers=1, format='json', log_dir=None, verbose=False):
    config = dict(locals())

    def body(report):
        df, skipped = extremal_scan(load_corpus(corpus), n_filter=n, workers=workers)
        if format == 'tsv':
            return df, EXIT_OK
        return {'rows': df, 'skipped': skipped}, EXIT_OK

    _execute('cubic scan', config, body)


def cubic_min(graph, format='json', log_dir=None, verbose=False):
    config = dict(locals())

    def body(report):
        report.add_input('graph', graph)
        return detold_min_cubic(parse_graph(graph)), EXIT_OK

    _execute('cubic min', config, body)


def cubic_bound(graph, format='json', log_dir=None, verbose=False):
    config = dict(locals())

    def body(report):
        report.add_input('graph', graph)
        g = parse_graph(graph)
        s, density = greedy_density_bound(g)
        return {'witness': s, 'size': len(s), 'density': density, 'verified': is_detold_cubic(g, s)}, EXIT_OK

    _execute('cubic bound', config, body)


########## reduce ##########

def reduce_build(cnf, out, graph_format='edges', format='json', log_dir=None, verbose=False):
    """构造归约实例，写出图文件以及 <out>.roles.json"""
    config = dict(locals())

    def body(report):
        report.add_input('cnf', cnf)
        art = build_instance(parse_cnf(cnf))
        write_graph(art.graph, out, graph_format)
        roles_path = f'{out}.roles.json'
        with open(roles_path, 'w', encoding='utf-8') as f:
            f.write(dump_role_map(art.role_map()))
        return {'n': art.graph.n, 'm': art.graph.m, 'K': art.K, 'graph': out, 'roles': roles_path}, EXIT_OK

    _execute('reduce build', config, body)


def _parse_assignment(text, num_vars):
    tokens = [t for t in str(text).replace(',', ' ').split()]
    if len(tokens) == 1 and len(tokens[0]) == num_vars:
        tokens = list(tokens[0])
    values = []
    for t in tokens:
        if t.upper() in ('1', 'T', 'TRUE'):
            values.append(True)
        elif t.upper() in ('0', 'F', 'FALSE'):
            values.append(False)
        else:
            raise InputError(f'Cannot read truth value {t!r}')
    return values


def reduce_certify(cnf, set=None, assignment=None, format='json', log_dir=None, verbose=False):
    """--set: 检测集 -> 赋值；--assignment（如 TTTTF）: 赋值 -> 检测集"""
    config = dict(locals())

    def body(report):
        report.add_input('cnf', cnf)
        art = build_instance(parse_cnf(cnf))
        if (set is None) == (assignment is None):
            raise InputError('Give exactly one of --set and --assignment')
        if set is not None:
            assign = set_to_assignment(art, parse_vertex_set(set, art.graph.n))
            return {'assignment': list(assign), 'K': art.K}, EXIT_OK
        s = assignment_to_set(art, _parse_assignment(assignment, art.formula.num_vars))
        return {'set': s, 'size': len(s), 'K': art.K}, EXIT_OK

    _execute('reduce certify', config, body)


########## grid ##########

def grid_verify(pattern, torus=False, format='json', log_dir=None, verbose=False):
    config = dict(locals())

    def body(report):
        report.add_input('pattern', pattern)
        p = load_pattern(pattern)
        verdict = verify_pattern(p)
        results = _verdict_dict(verdict)
        results['density'] = pattern_density(p)
        if torus:
            g, s = torus_graph(p)
            results['torus_ok'] = check(g, s, Level.DETOLD).ok
        return results, EXIT_OK if verdict.ok else EXIT_NOT_FOUND

    _execute('grid verify', config, body)


def grid_search(family, target, bound=16, exact=False, workers=1, out=None, format='json', log_dir=None,
                verbose=False):
    config = dict(locals())

    def body(report):
        found = search_pattern(family, bound, str(target), exact=exact, workers=workers)
        if found is None:
            return {'found': False}, EXIT_NOT_FOUND
        if out:
            with open(out, 'w') as f:
                f.write(dump_pattern(found))
        return {'found': True, 'pattern': found, 'density': pattern_density(found)}, EXIT_OK

    _execute('grid search', config, body)


########## extremal ##########

def extremal(sweep='all', max_n=6, corpus=None, workers=1, seed=0, kng=False, format='json',
             log_dir='output/extremal', verbose=False):
    """运行验收扫描（small / seven / edges / cubic / grids / all）"""
    config = dict(locals())

    def body(report):
        results = run_sweeps(sweep=sweep, max_n=max_n, corpus=corpus, workers=workers, seed=seed, kng=kng)
        passed = all(section.get('passed', True) for section in results.values() if isinstance(section, dict))
        return results, EXIT_OK if passed else EXIT_NOT_FOUND

    _execute('extremal', config, body)


if __name__ == '__main__':
    # 使用 fire 把子命令暴露为命令行接口
    fire.Fire({
        'verify': verify,
        'solve': solve,
        'cubic': {'scan': cubic_scan, 'min': cubic_min, 'bound': cubic_bound},
        'reduce': {'build': reduce_build, 'certify': reduce_certify},
        'grid': {'verify': grid_verify, 'search': grid_search},
        'extremal': extremal,
    })
