# Regenerates data/standin_lexicon.dic and src/standin_lexicon.cpp from the word table below.
# Run from anywhere: python3 tools/gen_standin_lexicon.py
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent

cats = [
 ("ppron", ["i","me","my","mine","we","us","our","you","your","yours","he","him","his","she","her","they","them","their","i'm","i'll","you're","we're"]),
 ("i", ["i","me","my","mine","myself","i'm","i'll","i've","i'd"]),
 ("we", ["we","us","our","ours","ourselves","we're","we'll","let's"]),
 ("you", ["you","your","yours","yourself","you're","you'll","u","ur","ya"]),
 ("shehe", ["he","him","his","she","her","hers","himself","herself","he's","she's"]),
 ("they", ["they","them","their","theirs","they're"]),
 ("ipron", ["it","it's","its","this","that","these","those","something","anything","everything","stuff","thing*"]),
 ("article", ["a","an","the"]),
 ("prep", ["to","in","on","at","for","with","from","of","about","into","over","after","before","by","under","around"]),
 ("auxverb", ["am","is","are","was","were","be","been","have","has","had","do","does","did","will","would","can","could","should","gonna","wanna"]),
 ("adverb", ["just","really","so","very","too","actually","pretty","totally","even","again","also","maybe"]),
 ("conj", ["and","but","or","because","so","if","then","though","while","until"]),
 ("negate", ["no","not","never","don't","can't","won't","didn't","isn't","nothing","nope"]),
 ("quant", ["all","some","many","much","few","more","most","every","lots","bunch","percent","average","sampl*"]),
 ("number", ["one","two","three","four","five","ten","hundred","thousand","first","second","half","million"]),
 ("posemo", ["happ*","love","nice","sweet","great","good","awesome","fun","glad","perfect","haha","lol"]),
 ("negemo", ["sad","hate","awful","terrible","worr*","nervous","afraid","angry","mad","hurt","cry*","lonely","stupid","damn","upset"]),
 ("anx", ["worr*","nervous","afraid","anxious","scared","fear*","panic*","tense","uneasy","stress*"]),
 ("anger", ["hate","angry","mad","annoy*","furious","pissed","rage","stupid","argu*","jerk"]),
 ("sad", ["sad","cry*","lonely","miss","grief","heartbr*","sorry","depress*","tears"]),
 ("affect", ["happ*","love","nice","sad","hate","worr*","angry","cry*","glad","fun","scared","upset","sorry"]),
 ("social", ["mom","dad","sister","brother","friend*","buddy","guys","talk*","party","family","people","meet"]),
 ("family", ["mom","mother","dad","father","sister","brother","aunt","uncle","cousin*","grandma","grandpa","family","niece","nephew","parents"]),
 ("friend", ["friend*","buddy","pal","dude","bro","roommate","neighbor*","bestie"]),
 ("female", ["she","her","girl*","woman","women","lady","mom","sister","aunt","grandma","queen"]),
 ("male", ["he","him","his","guy","man","men","boy*","dad","brother","uncle","grandpa","king"]),
 ("insight", ["think","know","realize*","understand*","consider*","idea","figure*","believe","learn*"]),
 ("cause", ["because","cause","why","reason*","effect*","since","therefore","hence"]),
 ("tentat", ["maybe","perhaps","guess","probably","might","seems","unsure","kinda","sorta"]),
 ("compare", ["than","like","bigger","better","worse","best","same","similar","compar*"]),
 ("percept", ["see","look*","watch*","hear*","listen*","feel*","touch*","taste*","smell*","saw"]),
 ("see", ["see","saw","seen","look*","watch*","view*","pictur*","photo*","color*","bright","glimps*"]),
 ("feel", ["feel*","felt","touch*","hold*","hug*","soft","warm","cold","pain*"]),
 ("bio", ["body","sick","doctor","eat*","food","sleep*","tired","hungry","sex*","pill*","blood"]),
 ("body", ["body","head","hand*","face","hair","heart","stomach","arm*","leg*","eye*"]),
 ("health", ["sick","doctor","hospital","medic*","pill*","flu","health*","clinic","ill","recover*"]),
 ("ingest", ["eat*","food","pizza","lunch","dinner","breakfast","hungry","drink*","beer","coffee","thai","snack*"]),
 ("affiliation", ["together","team","ally","join*","share*","social*","community","partner*","we"]),
 ("achieve", ["win*","success*","accomplish*","goal*","earn*","achiev*","best","finish*"]),
 ("power", ["boss","control*","power*","lead*","command*","authorit*","important"]),
 ("risk", ["danger*","risk*","safe*","careful","warn*","threat*","secur*","avoid*"]),
 ("focuspast", ["was","were","had","did","ago","yesterday","remember*","used","last","back","graduat*","alumni","freshman","sophomore","semester"]),
 ("focuspresent", ["is","are","now","today","currently","am","being"]),
 ("focusfuture", ["will","gonna","soon","tomorrow","future","plan*","someday","eventually","upcoming","next","visa","flight*","abroad"]),
 ("relativ", ["here","there","up","down","near","far","go","come","move*","time","day"]),
 ("motion", ["go","going","went","come","came","walk*","drive*","ride","run*","move*","arriv*","leav*"]),
 ("space", ["here","there","up","down","near","far","in","out","inside","outside","lobby","area","place"]),
 ("time", ["time","day","week","month","year","hour*","minute*","tonight","tomorrow","today","yesterday","soon","later","early","late"]),
 ("work", ["work*","job","office","meeting*","boss","project*","deadline*","client*","salary","coworker*","email*","report*","manager"]),
 ("leisure", ["game*","movie*","tv","party","music","play*","fun","vacation","chill*","netflix"]),
 ("home", ["home","house","apartment","room","kitchen","bed","couch","yard","rent","garage"]),
 ("money", ["money","cash","pay*","dollar*","bank","buck*","price*","cost*","cheap","expensive","bill*","owe*"]),
 ("relig", ["god","church","pray*","faith","holy","heaven","soul"]),
 ("death", ["die","dying","dead","death","kill*","funeral","grave","murder*","bury*"]),
 ("informal", ["lol","omg","haha","btw","gonna","wanna","yeah","yep","ok","okay","um","hmm","damn","shit","fuck*"]),
 ("swear", ["damn","shit","fuck*","hell","crap","ass","bitch*","piss*"]),
 ("netspeak", ["lol","omg","lmao","btw","brb","ttyl","idk","tbh","smh","rofl","ur","u","thx","pls"]),
 ("assent", ["yes","yeah","yep","ok","okay","sure","agree*","alright","cool","definitely"]),
 ("nonflu", ["um","umm","uh","hmm","er","sigh","erm","uhh"]),
 ("filler", ["like","y'know","imean","blah","whatever","anyway*"]),
]
lines = ["%"]
for i,(n,_) in enumerate(cats,1): lines.append(f"{i}\t{n}")
lines.append("%")
index = {}
order = []
for i,(n,words) in enumerate(cats,1):
    for w in words:
        if w not in index: index[w]=[]; order.append(w)
        if i not in index[w]: index[w].append(i)
for w in order: lines.append(w+"\t"+",".join(str(i) for i in index[w]))
text="\n".join(lines)+"\n"
open(ROOT / "data/standin_lexicon.dic","w").write(text)
cpp = '#include "speakerattr/lexicon.hpp"\n\nnamespace speakerattr {\n\n// Generated from data/standin_lexicon.dic.\nstd::string_view standin_lexicon_text() {\n  static constexpr std::string_view kText = R"LEX(' + text + ')LEX";\n  return kText;\n}\n\n}  // namespace speakerattr\n'
open(ROOT / "src/standin_lexicon.cpp","w").write(cpp)
print(len(cats), len(order))
