from lbboost.synthetic import SynthConfig, synth
from lbboost.boosting import LBBoost
from lbboost.post_processing import parameter_grid
from lbboost.evaluation import roc, average_precision
from lbboost.io import save_dataset, save_model, write_detections, write_roc

from lbboost.io import LocalIOHandler as Local

def main():

    HOME   = '/home/user/lbboost/synthetic'
    DATA   = f'{HOME}/data'
    OUTPUT = f'{HOME}/output'

    dataset = synth(SynthConfig(n_train = 10, n_validation = 5, n_test = 10,
                                width = 64, height = 64, min_objects = 5, max_objects = 5,
                                seed = 0))
    save_dataset(dataset, DATA)

    booster = LBBoost(
        train_options = {
            "iterations" : 30,
            "candidates" : 50,
            "grammar"    : "rich",
            "kernel"     : "FlatDisk",
            "kernel_radius" : 3.0,
            "mode"       : "Capped",
            "rho"        : 7.0,
            #"loss"      : "smooth",
            "seed"       : 0
            },
        log_file = f'{OUTPUT}/log.txt')

    ensemble = booster.train(dataset.partition('train'))
    booster.validate(ensemble, dataset.partition('validation'), parameter_grid('LLM', range(0, 5)))
    save_model(ensemble, f'{OUTPUT}/model.txt')

    test = dataset.partition('test')
    objectness_out = Local(name = 'objectness', path = f'{OUTPUT}/objectness', file = 'objectness_{image_id}.tif')
    detections = {}
    for entry in test:
        H = ensemble.objectness(entry.image, name = 'objectness')
        objectness_out.write_data(H.data, image_id = entry.image_id)
        detections[entry.image_id] = ensemble.detect(entry.image)
    write_detections(f'{OUTPUT}/detections.txt', detections)

    found = [detections[i] for i in test.image_ids]
    curve = roc(found, test.labels, delta = 10.0, truncation = 2.0)
    write_roc(f'{OUTPUT}/roc.txt', curve, average_precision(found, test.labels, delta = 10.0))

if __name__ == '__main__':
    main()
