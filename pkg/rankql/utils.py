from multiprocessing import Pool
import json
import math
import os
import numbers

import numpy as np
from tqdm import tqdm


def _apply(packed):
    function, args = packed
    return function(*args)


def mp(function, unfinished, processes, maxtasksperchild=None, progress=False, desc=None):
    """
    Run a function over a list of argument tuples, in parallel when asked.

    Results come back in the order of `unfinished` whatever the number of
    processes.

    Parameters
    ----------
    function : function
        Module-level (picklable) function to run.
    unfinished : list
        List of argument tuples to pass to the function.
    processes : int
        Number of processes to use. If -1, will use all available cpus.
        With 1, runs in the calling process.
    maxtasksperchild : int, default=None
        Number of tasks per child process.
    progress : bool, default=False
        Show a tqdm progress bar.
    desc : str, optional
        Label of the progress bar.

    Returns
    -------
    x : list
        List of results from the function.
    """
    if not unfinished:
        return []
    if processes == 1:
        return [function(*args) for args in tqdm(unfinished, desc=desc, disable=not progress)]
    if processes == -1:  # Will use all available cpus if processes is -1
        processes = None
    with Pool(processes=processes, maxtasksperchild=maxtasksperchild) as pool:
        chunksize = max(1, len(unfinished) // (4 * (processes or os.cpu_count() or 1)))
        packed = ((function, args) for args in unfinished)
        return list(tqdm(pool.imap(_apply, packed, chunksize=chunksize), total=len(unfinished),
                         desc=desc, disable=not progress))


def mkdir(path):
    """
    Make a directory if it doesn't exist.

    Parameters
    ----------
    path : str
        Path to the directory.
    """
    if path and not os.path.exists(path):
        os.makedirs(path)


def _float(x):
    if math.isnan(x):
        return 'NaN'
    if math.isinf(x):
        return 'Infinity' if x > 0 else '-Infinity'
    return format(x, '.17g')


def _encode(obj, indent, level):
    pad = '\n' + ' ' * (indent * (level + 1)) if indent else ''
    end = '\n' + ' ' * (indent * level) if indent else ''
    sep = ',' if indent else ', '

    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, numbers.Integral):
        return str(int(obj))
    if isinstance(obj, numbers.Real):
        return _float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if hasattr(obj, 'to_dict'):
        return _encode(obj.to_dict(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return '{}'
        items = ['{}: {}'.format(json.dumps(str(k)), _encode(obj[k], indent, level + 1))
                 for k in sorted(obj, key=str)]
        return '{' + pad + (sep + pad).join(items) + end + '}'
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return '[]'
        items = [_encode(v, indent, level + 1) for v in obj]
        return '[' + pad + (sep + pad).join(items) + end + ']'
    raise TypeError('cannot serialise {!r} to JSON'.format(type(obj).__name__))


def dumps_json(obj, indent=2):
    """
    Serialise `obj` to JSON deterministically.

    Keys are sorted, floats carry 17 significant digits and non-finite
    floats are written as ``NaN``, ``Infinity`` and ``-Infinity`` (readable
    by :func:`json.loads`). Objects with a ``to_dict`` method are serialised
    through it.

    Parameters
    ----------
    obj : object
    indent : int, default=2
        Indentation width; 0 gives a single line.

    Returns
    -------
    text : str
    """
    return _encode(obj, indent, 0)


def write_json(obj, path=None, echo=None):
    """
    Write `obj` as deterministic JSON to `path`, or pass the text to `echo`
    (e.g. :func:`click.echo`) when no path is given.
    """
    text = dumps_json(obj)
    if path is None or path == '-':
        (echo or print)(text)
        return text
    mkdir(os.path.dirname(os.path.abspath(path)))
    with open(path, 'w') as fp:
        fp.write(text + '\n')
    return text
