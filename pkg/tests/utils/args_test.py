import json
import os
import tempfile
import unittest

from lbboost.utils.args import get_options, get_args, parse_json_options
from lbboost.utils.errors import OptionsError
from lbboost.utils.parse import substitute_values, resolve_tags

class TestParse(unittest.TestCase):

    def test_resolve_tags(self):
        tags = resolve_tags({'HOME': '/data', 'OUTPUT': '{HOME}/output', 'LOG': '{OUTPUT}/log.txt'})
        self.assertEqual(tags['LOG'], '/data/output/log.txt')

    def test_substitute_values(self):
        structure = {'a': '{X}/file_{image_id}.tif', 'b': [1, '{X}'], 'c': 2.5}
        out = substitute_values(structure, {'X': 'dir'})
        self.assertEqual(out, {'a': 'dir/file_{image_id}.tif', 'b': [1, 'dir'], 'c': 2.5})

class TestOptions(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.options = {
            'tags': {'HOME': '/home/user/lbboost', 'OUTPUT': '{HOME}/output'},
            'train_options': {'iterations': 30, 'candidates': 50},
            'synth_options': {'n_train': 4},
            'io_options': {'model': '{OUTPUT}/model.txt'}
        }
        self.path = self._write(self.options)

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, options, name = 'options.json') -> str:
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            json.dump(options, f)
        return path

    def test_json(self):
        options = parse_json_options(self.path)
        self.assertEqual(options['io_options']['model'], '/home/user/lbboost/output/model.txt')
        self.assertEqual(options['train_options']['iterations'], 30)
        self.assertEqual(options['eval_options'], {})

    def test_flags_override(self):
        options = get_options(['train', '-options', self.path, '--iterations', '5', '--loss', 'smooth',
                               '--seed', '3', '--kernel-radius', '2.5', '--method', 'KDE'])
        self.assertEqual(options['command'], 'train')
        self.assertEqual(options['train_options']['iterations'], 5)
        self.assertEqual(options['train_options']['candidates'], 50)
        self.assertEqual(options['train_options']['loss'], 'smooth')
        self.assertEqual(options['train_options']['kernel_radius'], 2.5)
        self.assertEqual(options['train_options']['seed'], 3)
        self.assertEqual(options['synth_options']['seed'], 3)
        self.assertEqual(options['extraction_options']['method'], 'KDE')

    def test_missing_file(self):
        with self.assertRaises(OptionsError):
            get_options(['eval', '-options', os.path.join(self.tmp.name, 'missing.json')])

    def test_invalid_json(self):
        path = os.path.join(self.tmp.name, 'bad.json')
        with open(path, 'w') as f:
            f.write('{"train_options": {')
        with self.assertRaises(OptionsError):
            parse_json_options(path)
        with self.assertRaises(OptionsError):
            parse_json_options(self._write({'train_options': [1, 2]}, 'list.json'))

    def test_unknown_command(self):
        with self.assertRaises(SystemExit):
            get_args(['fit', '-options', self.path])

if __name__ == '__main__':
    unittest.main()
