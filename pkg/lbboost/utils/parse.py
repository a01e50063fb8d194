def substitute_values(structure, tag_dict: dict, rec: bool = False):
    """
    replace the {tags} in the structure with the values in the tag_dict
    """

    if isinstance(structure, dict):
        return {key: substitute_values(value, tag_dict, rec) for key, value in structure.items()}
    elif isinstance(structure, list):
        return [substitute_values(value, tag_dict, rec) for value in structure]
    elif isinstance(structure, str):
        return substitute_string(structure, tag_dict, rec)
    else:
        # numbers and booleans are left as they are, JSON already typed them
        return structure

def substitute_string(string: str, tag_dict: dict, rec: bool = False) -> str:
    """
    replace the {tags} in the string with the values in the tag_dict.
    With rec = True, substitution is repeated until no known tag is left (tags can refer to other tags).
    """
    while "{" in string and "}" in string:
        new_string = string
        for key, value in tag_dict.items():
            new_string = new_string.replace('{' + key + '}', str(value))
        if not rec or new_string == string:
            string = new_string
            break
        string = new_string
    return string

def resolve_tags(tags: dict) -> dict:
    """
    resolve tags that refer to other tags, e.g. {"HOME": "/data", "IMAGES": "{HOME}/images"}
    """
    resolved = dict(tags)
    for _ in range(len(resolved) + 1):
        updated = substitute_values(resolved, resolved)
        if updated == resolved:
            break
        resolved = updated
    return resolved
