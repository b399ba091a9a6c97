"""Settings for plots."""

###################################################################################################
###################################################################################################

# Define default figure sizes
PLT_FIGSIZES = {'frame' : (5, 5),
                'curves' : (8, 5),
                'history' : (7, 4)}

# Define defaults for colors for plots, based on what is plotted
PLT_COLORS = {'gt' : '#28a103',
              'pred' : '#d62728',
              'HOTA' : 'black',
              'DetA' : '#19b6e6',
              'AssA' : '#5325e8'}

# Labels for the score curves of a HOTA report
HOTA_CURVES = ('HOTA', 'DetA', 'AssA')
